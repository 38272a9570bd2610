//! Free Lie algebra tools: Bernoulli numbers, BCH and Hausdorff series,
//! symmetrised derivation products, bracket expansions, Chen–Strichartz
//! coefficients and a few combinatorial identities.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::tensor::{shuffle, GradedTensor};

/// Bernoulli numbers are cached up to this index.
pub const BERNOULLI_MAX: usize = 64;

fn bernoulli_table() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let mut b: Vec<BigRational> = vec![BigRational::one()];
        for m in 1..=BERNOULLI_MAX {
            let mut acc = BigRational::zero();
            let mut binom = BigInt::one();
            for (k, bk) in b.iter().enumerate() {
                acc += BigRational::from_integer(binom.clone()) * bk;
                binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        b
    })
}

/// Exact Bernoulli number `B_m` of `z/(e^z - 1)`.
pub fn bernoulli_exact(m: usize) -> Result<BigRational> {
    bernoulli_table()
        .get(m)
        .cloned()
        .ok_or_else(|| Error::InvalidArgument(format!("Bernoulli index {m} exceeds cache bound {BERNOULLI_MAX}")))
}

/// Bernoulli number `B_m` as a float (`B_1 = -1/2`).
pub fn bernoulli(m: usize) -> Result<f64> {
    Ok(bernoulli_exact(m)?.to_f64().unwrap_or(f64::NAN))
}

/// `B_m / m!` as a float.
pub fn bernoulli_over_factorial(m: usize) -> Result<f64> {
    let mut f = BigInt::one();
    for k in 2..=m {
        f *= BigInt::from(k);
    }
    let q = bernoulli_exact(m)? / BigRational::from_integer(f);
    Ok(q.to_f64().unwrap_or(f64::NAN))
}

/// `ad_w(v) = w v - v w`.
pub fn ad(w: &GradedTensor, v: &GradedTensor) -> Result<GradedTensor> {
    w.bracket(v)
}

fn require_no_scalar(x: &GradedTensor, what: &str) -> Result<()> {
    if x.scalar().norm() > 1e-12 {
        return Err(Error::Domain(format!("{what} must have zero scalar component")));
    }
    Ok(())
}

/// `log(exp(v) exp(w))` at the common truncation.
pub fn bch(v: &GradedTensor, w: &GradedTensor) -> Result<GradedTensor> {
    require_no_scalar(v, "bch argument")?;
    require_no_scalar(w, "bch argument")?;
    v.exp()?.mul(&w.exp()?)?.log()
}

/// `H_1(v, w) = sum_m B_m/m! ad_w^m(v)`.
pub fn hausdorff_h1(v: &GradedTensor, w: &GradedTensor) -> Result<GradedTensor> {
    require_no_scalar(v, "H_1 argument")?;
    require_no_scalar(w, "H_1 argument")?;
    let mut out = GradedTensor::zeros(v.dim(), v.depth())?;
    let mut term = v.clone();
    for m in 0..=v.depth() {
        if term.is_zero() {
            break;
        }
        out.add_assign_scaled(&term, C64::new(bernoulli_over_factorial(m)?, 0.0))?;
        term = w.bracket(&term)?;
    }
    Ok(out)
}

/// Generic word-substitution engine.
///
/// Letter `a` maps to `base[a]`, perturbed by `t_j * A` for each `(j, A)` in
/// `perturb[a]`, where the `t_j` commute and square to zero. Returns the
/// image split by monomial `t_S` (indexed by bitmask `S`). Images must have
/// zero scalar part.
fn substitute_masked(
    x: &GradedTensor,
    target_depth: usize,
    base: &[GradedTensor],
    perturb: &[Vec<(usize, GradedTensor)>],
    nbits: usize,
) -> Result<Vec<GradedTensor>> {
    let d = x.dim();
    if base.len() != d || perturb.len() != d {
        return Err(Error::AlphabetMismatch(base.len(), d));
    }
    let tdim = base[0].dim();
    let nmask = 1usize << nbits;
    let mut out = vec![GradedTensor::zeros(tdim, target_depth)?; nmask];

    // prefixes (length, index) of words carrying a nonzero coefficient
    let mut support: HashSet<(usize, usize)> = HashSet::new();
    for n in 0..=x.depth() {
        for (idx, c) in x.level(n).iter().enumerate() {
            if *c != C64::new(0.0, 0.0) {
                let mut p = 1usize;
                for k in 0..=n {
                    support.insert((k, idx % p));
                    p *= d;
                }
            }
        }
    }

    let mut start = vec![GradedTensor::zeros(tdim, target_depth)?; nmask];
    start[0] = GradedTensor::one(tdim, target_depth)?;
    // stack of (prefix length, prefix index, place value, partial images)
    let mut stack = vec![(0usize, 0usize, 1usize, start)];
    while let Some((k, idx, pw, parts)) = stack.pop() {
        let c = x.level(k)[idx];
        if c != C64::new(0.0, 0.0) {
            for (o, p) in out.iter_mut().zip(&parts) {
                o.add_assign_scaled(p, c)?;
            }
        }
        if k == x.depth() || k >= target_depth {
            continue;
        }
        for a in 0..d {
            let nidx = idx + pw * a;
            if !support.contains(&(k + 1, nidx)) {
                continue;
            }
            let mut next = Vec::with_capacity(nmask);
            for s in 0..nmask {
                let mut t = parts[s].mul(&base[a])?;
                for (j, img) in &perturb[a] {
                    if s & (1 << j) != 0 {
                        t.add_assign_scaled(&parts[s & !(1 << j)].mul(img)?, C64::new(1.0, 0.0))?;
                    }
                }
                next.push(t);
            }
            if next.iter().all(|t| t.is_zero()) {
                continue;
            }
            stack.push((k + 1, nidx, pw * d, next));
        }
    }
    Ok(out)
}

/// Algebra homomorphism sending letter `a` to `images[a]`.
pub fn substitute(x: &GradedTensor, images: &[GradedTensor]) -> Result<GradedTensor> {
    let first = images.first().ok_or_else(|| Error::InvalidArgument("no images".into()))?;
    for img in images {
        require_no_scalar(img, "substitution image")?;
    }
    let perturb = vec![Vec::new(); images.len()];
    let mut parts = substitute_masked(x, first.depth(), images, &perturb, 0)?;
    Ok(parts.swap_remove(0))
}

fn identity_letters(dim: usize, depth: usize) -> Result<Vec<GradedTensor>> {
    (0..dim).map(|a| GradedTensor::letter(dim, depth, a)).collect()
}

/// Derivation fixed by its values on letters (`None` means zero).
pub fn derivation(x: &GradedTensor, images: &[Option<GradedTensor>]) -> Result<GradedTensor> {
    let base = identity_letters(x.dim(), x.depth())?;
    let perturb: Vec<Vec<(usize, GradedTensor)>> =
        images.iter().map(|img| img.iter().map(|t| (0, t.clone())).collect()).collect();
    let mut parts = substitute_masked(x, x.depth(), &base, &perturb, 1)?;
    Ok(parts.swap_remove(1))
}

/// Symmetrised derivation product `A_1 d ⊗s ... ⊗s A_r d` acting on
/// occurrences of letter `e` (letter index `e1`): replaces `r` of them by
/// the `A`'s in every order and at every placement.
pub fn symmetrized_derivation_product(
    a_list: &[GradedTensor],
    target: &GradedTensor,
    e1: usize,
) -> Result<GradedTensor> {
    let r = a_list.len();
    if r > 10 {
        return Err(Error::InvalidArgument("too many factors in symmetrised product".into()));
    }
    if e1 >= target.dim() {
        return Err(Error::LetterOutOfRange { letter: e1, dim: target.dim() });
    }
    let base = identity_letters(target.dim(), target.depth())?;
    let mut perturb = vec![Vec::new(); target.dim()];
    for (j, a) in a_list.iter().enumerate() {
        require_no_scalar(a, "symmetrised product factor")?;
        perturb[e1].push((j, a.clone()));
    }
    let mut parts = substitute_masked(target, target.depth(), &base, &perturb, r)?;
    Ok(parts.swap_remove((1 << r) - 1))
}

/// `n`-th Hausdorff series `H_n(v, w) = (1/n!) (H_1(v,w) d_w)^n (w)`.
///
/// Built symbolically over two letters and then substituted, so the
/// derivation touches only occurrences of `w`. `H_0 = w`.
pub fn hausdorff_hn(n: usize, v: &GradedTensor, w: &GradedTensor) -> Result<GradedTensor> {
    require_no_scalar(v, "H_n argument")?;
    require_no_scalar(w, "H_n argument")?;
    let symbolic = hausdorff_symbolic(n, v.depth())?;
    substitute(&symbolic, &[v.clone(), w.clone()])
}

/// `H_0..=H_n` over the two-letter alphabet (`0 = v`, `1 = w`).
pub fn hausdorff_symbolic_all(n: usize, depth: usize) -> Result<Vec<GradedTensor>> {
    let v = GradedTensor::letter(2, depth, 0)?;
    let w = GradedTensor::letter(2, depth, 1)?;
    let h1 = hausdorff_h1(&v, &w)?;
    let images = [None, Some(h1)];
    let mut out = vec![w];
    for k in 1..=n {
        let prev = out.last().expect("nonempty");
        let next = derivation(prev, &images)?.scale(C64::new(1.0 / k as f64, 0.0));
        out.push(next);
    }
    Ok(out)
}

fn hausdorff_symbolic(n: usize, depth: usize) -> Result<GradedTensor> {
    Ok(hausdorff_symbolic_all(n, depth)?.pop().expect("nonempty"))
}

/// `H_0 + H_1 + ... + H_n` evaluated at `(v, w)`.
pub fn hausdorff_partial_sum(n: usize, v: &GradedTensor, w: &GradedTensor) -> Result<GradedTensor> {
    let all = hausdorff_symbolic_all(n, v.depth())?;
    let mut sum = GradedTensor::zeros(2, v.depth())?;
    for h in &all {
        sum.add_assign_scaled(h, C64::new(1.0, 0.0))?;
    }
    substitute(&sum, &[v.clone(), w.clone()])
}

/// Alphabet used by the vector Hausdorff series: letter 0 is `e_1` and each
/// distinct `k` gets an opaque letter standing for `D_k L~`.
#[derive(Clone, Debug)]
pub struct HnAlphabet {
    pub ks: Vec<usize>,
    distinct: Vec<usize>,
}

impl HnAlphabet {
    pub fn new(ks: &[usize]) -> Result<Self> {
        if ks.is_empty() || ks.contains(&0) {
            return Err(Error::InvalidArgument("K must be a nonempty list of positive integers".into()));
        }
        let mut distinct = Vec::new();
        for &k in ks {
            if !distinct.contains(&k) {
                distinct.push(k);
            }
        }
        Ok(Self { ks: ks.to_vec(), distinct })
    }

    pub fn size(&self) -> usize {
        1 + self.distinct.len()
    }

    /// Letter standing for `D_k L~`.
    pub fn letter_of(&self, k: usize) -> Option<usize> {
        self.distinct.iter().position(|&x| x == k).map(|p| p + 1)
    }
}

fn hn_h1(alpha: &HnAlphabet, k: usize, depth: usize) -> Result<GradedTensor> {
    let dim = alpha.size();
    let x = GradedTensor::letter(dim, depth, alpha.letter_of(k).expect("k in alphabet"))?;
    hausdorff_h1(&x, &GradedTensor::letter(dim, depth, 0)?)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `H_K` by its definition `(1/n!) (H_1(k_1) d) ∘ ... ∘ (H_1(k_n) d)(e_1)`.
pub fn hn_vector_direct(ks: &[usize], depth: usize) -> Result<(HnAlphabet, GradedTensor)> {
    let alpha = HnAlphabet::new(ks)?;
    let dim = alpha.size();
    let mut t = GradedTensor::letter(dim, depth, 0)?;
    for &k in ks.iter().rev() {
        let mut images = vec![None; dim];
        images[0] = Some(hn_h1(&alpha, k, depth)?);
        t = derivation(&t, &images)?;
    }
    t.scale_mut(C64::new(1.0 / factorial(ks.len()), 0.0));
    Ok((alpha, t))
}

/// All set partitions of `items`.
pub fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = items.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for p in set_partitions(rest) {
        let mut alone = vec![vec![first]];
        alone.extend(p.iter().cloned());
        out.push(alone);
        for i in 0..p.len() {
            let mut joined = p.clone();
            joined[i].insert(0, first);
            out.push(joined);
        }
    }
    out
}

/// `H_K` by the partition recursion
/// `H_n = sum_P (l_1!...l_r!/n!) H^_P(k_1..k_{n-1})(H_1(k_n))`.
pub fn hn_vector_recursive(ks: &[usize], depth: usize) -> Result<(HnAlphabet, GradedTensor)> {
    let alpha = HnAlphabet::new(ks)?;
    let mut memo = HashMap::new();
    let t = hn_recursive_inner(&alpha, ks, depth, &mut memo)?;
    Ok((alpha, t))
}

fn hn_recursive_inner(
    alpha: &HnAlphabet,
    ks: &[usize],
    depth: usize,
    memo: &mut HashMap<Vec<usize>, GradedTensor>,
) -> Result<GradedTensor> {
    if let Some(t) = memo.get(ks) {
        return Ok(t.clone());
    }
    let n = ks.len();
    let last = hn_h1(alpha, ks[n - 1], depth)?;
    let mut out = GradedTensor::zeros(alpha.size(), depth)?;
    let idx: Vec<usize> = (0..n - 1).collect();
    for part in set_partitions(&idx) {
        let mut factors = Vec::with_capacity(part.len());
        let mut weight = 1.0 / factorial(n);
        for block in &part {
            weight *= factorial(block.len());
            let sub: Vec<usize> = block.iter().map(|&i| ks[i]).collect();
            factors.push(hn_recursive_inner(alpha, &sub, depth, memo)?);
        }
        let term = symmetrized_derivation_product(&factors, &last, 0)?;
        out.add_assign_scaled(&term, C64::new(weight, 0.0))?;
    }
    memo.insert(ks.to_vec(), out.clone());
    Ok(out)
}

/// Right-nested bracket `[e_{j_1}, [e_{j_2}, ..., e_{j_m}]]` at depth `|J|`.
pub fn right_nested_bracket(dim: usize, word: &[usize]) -> Result<GradedTensor> {
    let depth = word.len();
    let (&last, rest) = word
        .split_last()
        .ok_or_else(|| Error::InvalidArgument("empty word".into()))?;
    let mut t = GradedTensor::letter(dim, depth, last)?;
    for &a in rest.iter().rev() {
        t = GradedTensor::letter(dim, depth, a)?.bracket(&t)?;
    }
    Ok(t)
}

/// Word-level expansion of the right-nested bracket:
/// `sum_K (-1)^|K| e_{J \ (J_K, j_{m-1}, j_m)} ⊗ [e_{j_{m-1}}, e_{j_m}] ⊗ e_{rev J_K}`.
pub fn liemon_expand(dim: usize, word: &[usize]) -> Result<GradedTensor> {
    let m = word.len();
    if m < 2 {
        return right_nested_bracket(dim, word);
    }
    let mut t = GradedTensor::zeros(dim, m)?;
    let (a, b) = (word[m - 2], word[m - 1]);
    for mask in 0u32..(1 << (m - 2)) {
        let sign = if mask.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        let kept: Vec<usize> = (0..m - 2).filter(|i| mask & (1 << i) == 0).map(|i| word[i]).collect();
        let moved: Vec<usize> = (0..m - 2).rev().filter(|i| mask & (1 << i) != 0).map(|i| word[i]).collect();
        for (pair, s) in [([a, b], sign), ([b, a], -sign)] {
            let mut w = kept.clone();
            w.extend_from_slice(&pair);
            w.extend_from_slice(&moved);
            t.add_coeff(&w, C64::new(s, 0.0))?;
        }
    }
    Ok(t)
}

/// A permutation of `{0, ..., m-1}` stored by images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::InvalidArgument(format!("not a permutation: {images:?}")));
            }
            seen[i] = true;
        }
        Ok(Self(images))
    }

    pub fn identity(m: usize) -> Self {
        Self((0..m).collect())
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    /// Number of descents `#{j : s(j) > s(j+1)}`.
    pub fn descent_count(&self) -> usize {
        self.0.windows(2).filter(|w| w[0] > w[1]).count()
    }

    pub fn all(m: usize) -> impl Iterator<Item = Permutation> {
        use itertools::Itertools;
        (0..m).permutations(m).map(Permutation)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Chen–Strichartz weight `(-1)^e / (m^2 C(m-1, e))`, `e` the descent count.
pub fn chen_strichartz_coeff(sigma: &Permutation) -> f64 {
    let m = sigma.order();
    if m == 0 {
        return 0.0;
    }
    let e = sigma.descent_count();
    let sign = if e.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign / ((m * m) as f64 * binomial(m - 1, e))
}

/// Coefficient of the word `target` (distinct letters) in the right-nested
/// bracket of `j`.
pub fn bracket_coeff_distinct(j: &[usize], target: &[usize]) -> i64 {
    match j.len() {
        0 => i64::from(target.is_empty()),
        1 => i64::from(target.len() == 1 && target[0] == j[0]),
        n => {
            if target.len() != n {
                return 0;
            }
            let a = j[0];
            let mut c = 0;
            if target[0] == a {
                c += bracket_coeff_distinct(&j[1..], &target[1..]);
            }
            if target[n - 1] == a {
                c -= bracket_coeff_distinct(&j[1..], &target[..n - 1]);
            }
            c
        }
    }
}

/// Consecutive partial sum `c_p + ... + c_q` with 1-based indices.
fn csum(c: &[C64], p: usize, q: usize) -> C64 {
    if p > q {
        return C64::new(1.0, 0.0);
    }
    c[p - 1..q].iter().sum()
}

fn check_denominator(z: C64, scale: f64) -> Result<C64> {
    if z.norm() <= 1e-14 * scale.max(1.0) {
        return Err(Error::Singular("zero consecutive sum in a denominator".into()));
    }
    Ok(z)
}

/// Left side of the consecutive-sum identity, by enumerating the shuffles
/// of `(s, s-1, ..., 1)` with `(s+2, ..., R+1)`.
pub fn consecutive_shuffle_sum(c: &[C64], s: usize) -> Result<C64> {
    let (r, scale) = shuffle_args(c, s)?;
    let down: Vec<usize> = (1..=s).rev().collect();
    let up: Vec<usize> = (s + 2..=r + 1).collect();
    let mut total = C64::new(0.0, 0.0);
    for order in shuffle(&down, &up) {
        let mut acc = C64::new(0.0, 0.0);
        let mut prod = C64::new(1.0, 0.0);
        for &i in &order {
            acc += c[i - 1];
            prod *= check_denominator(acc, scale)?;
        }
        total += prod.inv();
    }
    Ok(total)
}

/// Right side `(prod_{k=1}^{s} c_k^s)^{-1} (prod_{k=s+2}^{R+1} c_{s+2}^k)^{-1}`.
pub fn consecutive_shuffle_rhs(c: &[C64], s: usize) -> Result<C64> {
    let (r, scale) = shuffle_args(c, s)?;
    let mut prod = C64::new(1.0, 0.0);
    for k in 1..=s {
        prod *= check_denominator(csum(c, k, s), scale)?;
    }
    for k in s + 2..=r + 1 {
        prod *= check_denominator(csum(c, s + 2, k), scale)?;
    }
    Ok(prod.inv())
}

fn shuffle_args(c: &[C64], s: usize) -> Result<(usize, f64)> {
    if c.is_empty() {
        return Err(Error::InvalidArgument("need R+1 >= 1 numbers".into()));
    }
    let r = c.len() - 1;
    if s > r {
        return Err(Error::InvalidArgument(format!("need s <= R, got s = {s}, R = {r}")));
    }
    Ok((r, c.iter().map(|z| z.norm()).fold(0.0, f64::max)))
}

/// Both sides of the neo-classical inequality
/// `sum_{i=0}^m 1/((i/p)! ((m-i)/p)!) <= p 2^{m/p} / (m/p)!`.
pub fn neo_classical_sides(p: f64, m: usize) -> (f64, f64) {
    let fact = |x: f64| libm::tgamma(x + 1.0);
    let lhs = (0..=m)
        .map(|i| 1.0 / (fact(i as f64 / p) * fact((m - i) as f64 / p)))
        .sum();
    let mp = m as f64 / p;
    (lhs, p * 2f64.powf(mp) / fact(mp))
}
