//! Exhaustive census of genus-2 curve models over small fields.
//!
//! Every smooth model `y^2 = f(x)` (odd `q`, `deg f` in {5, 6}, `f`
//! squarefree) or `y^2 + h(x)y = f(x)` (`q` even, weighted sextic in
//! `P(1,3,1)`) is enumerated, its points are counted over `F_q` and
//! `F_{q^2}`, and the Weil coefficients `(a, b)` are recovered from the two
//! counts. The resulting set of realized `(a, b)` is compared against the
//! Jacobian classification. Isomorphic models are not de-duplicated; only
//! the set of realized classes matters.
//!
//! Work is split over the leading coefficients and merged by summing
//! per-class counts, so results do not depend on the number of threads.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::PrimePower;
use crate::error::{Error, Result};
use crate::jacobian::is_jacobian;
use crate::smallfield::{base_field, extend, poly, Element, Field};
use crate::weil::{is_admissible, predicted_curve_count, WeilCoeffs};

/// Field sizes the census always supports.
pub const DEFAULT_Q: [i64; 5] = [2, 3, 5, 7, 9];
/// Field sizes that need [`CensusOptions::allow_opt_in`].
pub const OPT_IN_Q: [i64; 2] = [4, 13];
/// Number of curves re-counted over `F_{q^3}` by [`verify_census`].
pub const ZETA_SAMPLE: usize = 50;
pub const CACHE_VERSION: u32 = 1;

/// `y^2 = f(x)` over odd `F_q`; `f[i]` is the coefficient of `x^i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CurveOdd {
    pub q: PrimePower,
    pub f: [Element; 7],
}

/// `Y^2 + H(X,Z)Y = F(X,Z)` in `P(1,3,1)` over `F_q`, `q` even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CurveChar2 {
    pub q: PrimePower,
    pub h: [Element; 4],
    pub f: [Element; 7],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(untagged)]
pub enum Curve {
    Odd(CurveOdd),
    Char2(CurveChar2),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRecord {
    pub curve: Curve,
    pub n1: i64,
    pub n2: i64,
    pub a: i64,
    pub b: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusSet {
    pub q: PrimePower,
    /// Number of smooth models enumerated.
    pub models: u64,
    /// Realized `(a, b)` with the number of models realizing each.
    pub classes: BTreeMap<(i64, i64), u64>,
}

impl CensusSet {
    pub fn weil_set(&self) -> BTreeSet<(i64, i64)> {
        self.classes.keys().copied().collect()
    }

    pub fn contains(&self, a: i64, b: i64) -> bool {
        self.classes.contains_key(&(a, b))
    }

    fn merge(mut self, other: CensusSet) -> CensusSet {
        self.models += other.models;
        for (key, count) in other.classes {
            *self.classes.entry(key).or_default() += count;
        }
        self
    }
}

#[derive(Clone, Debug, Default)]
pub struct CensusOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
    /// Also accept the [`OPT_IN_Q`] sizes.
    pub allow_opt_in: bool,
    /// Directory for cache files; no caching when `None`.
    pub cache_dir: Option<PathBuf>,
    /// Recompute even when a valid cache file exists.
    pub force: bool,
}

/// The fields needed to census one `q`: `F_q`, `F_{q^2}`, `F_{q^3}`.
pub struct Census {
    q: PrimePower,
    fields: [Arc<Field>; 3],
}

impl Census {
    pub fn new(q: i64, allow_opt_in: bool) -> Result<Self> {
        let supported = DEFAULT_Q.contains(&q) || (allow_opt_in && OPT_IN_Q.contains(&q));
        if !supported {
            return Err(Error::UnsupportedQ(q));
        }
        let q = PrimePower::new(q)?;
        let base = base_field(q.p() as u32, q.m())?;
        let quad = extend(&base, 2)?;
        let cubic = extend(&base, 3)?;
        Ok(Self {
            q,
            fields: [base, quad, cubic],
        })
    }

    pub fn q(&self) -> PrimePower {
        self.q
    }

    /// `F_{q^k}` for `k` in 1..=3.
    pub fn field(&self, k: u32) -> &Arc<Field> {
        &self.fields[k as usize - 1]
    }

    fn qu(&self) -> u64 {
        self.q.q() as u64
    }

    fn even(&self) -> bool {
        self.q.p() == 2
    }

    /// Number of candidate models before the smoothness filter.
    pub fn candidate_count(&self) -> u64 {
        let q = self.qu();
        if self.even() {
            (q.pow(4) - 1) * q.pow(7)
        } else {
            q.pow(7) - q.pow(5)
        }
    }

    /// Candidates are split into blocks by their leading coefficients: `h`
    /// in characteristic 2, `(f6, f5)` otherwise.
    fn block_count(&self) -> u64 {
        let q = self.qu();
        if self.even() {
            q.pow(4) - 1
        } else {
            q * q - 1
        }
    }

    fn block_len(&self) -> u64 {
        let q = self.qu();
        if self.even() {
            q.pow(7)
        } else {
            q.pow(5)
        }
    }

    /// The `id`-th candidate, `id < candidate_count()`.
    pub fn candidate(&self, id: u64) -> Curve {
        let q = self.qu();
        let (block, rest) = (id / self.block_len(), id % self.block_len());
        let digits = |mut v: u64, out: &mut [Element]| {
            for slot in out.iter_mut() {
                *slot = self.field(1).element((v % q) as u32).expect("digit < q");
                v /= q;
            }
        };
        if self.even() {
            let mut h = [Element::ZERO; 4];
            let mut f = [Element::ZERO; 7];
            digits(block + 1, &mut h);
            digits(rest, &mut f);
            Curve::Char2(CurveChar2 { q: self.q, h, f })
        } else {
            // Skip the q leading pairs with f6 = f5 = 0.
            let mut f = [Element::ZERO; 7];
            digits(rest + q.pow(5) * (block + 1), &mut f);
            Curve::Odd(CurveOdd { q: self.q, f })
        }
    }

    /// Whether a candidate is a smooth genus-2 model.
    pub fn is_smooth(&self, curve: &Curve) -> bool {
        match curve {
            Curve::Odd(c) => {
                let f = poly::trim(c.f.to_vec());
                matches!(poly::degree(&f), Some(5 | 6)) && poly::is_squarefree(self.field(1), &f)
            }
            Curve::Char2(c) => smooth_char2_in(self, &c.h, &c.f),
        }
    }

    /// All smooth models in candidate order.
    pub fn curves(&self) -> impl Iterator<Item = Curve> + '_ {
        (0..self.candidate_count())
            .map(|id| self.candidate(id))
            .filter(|c| self.is_smooth(c))
    }

    /// `#C(F_{q^k})` for `k` in 1..=3.
    pub fn count_points(&self, curve: &Curve, k: u32) -> i64 {
        let field = self.field(k);
        match curve {
            Curve::Odd(c) => count_odd(field, &c.f),
            Curve::Char2(c) => count_char2(field, &c.h, &c.f),
        }
    }

    pub fn record(&self, curve: Curve) -> Result<CensusRecord> {
        let n1 = self.count_points(&curve, 1);
        let n2 = self.count_points(&curve, 2);
        let (a, b) = weil_from_counts(self.q, n1, n2)?;
        Ok(CensusRecord {
            curve,
            n1,
            n2,
            a,
            b,
        })
    }

    fn run_block(&self, block: u64) -> Result<CensusSet> {
        let mut out = CensusSet {
            q: self.q,
            models: 0,
            classes: BTreeMap::new(),
        };
        let start = block * self.block_len();
        for id in start..start + self.block_len() {
            let curve = self.candidate(id);
            if !self.is_smooth(&curve) {
                continue;
            }
            let rec = self.record(curve)?;
            out.models += 1;
            *out.classes.entry((rec.a, rec.b)).or_default() += 1;
        }
        Ok(out)
    }

    /// Runs the full census on the current rayon pool.
    pub fn run(&self) -> Result<CensusSet> {
        let empty = || CensusSet {
            q: self.q,
            models: 0,
            classes: BTreeMap::new(),
        };
        (0..self.block_count())
            .into_par_iter()
            .map(|block| self.run_block(block))
            .try_reduce(empty, |x, y| Ok(x.merge(y)))
    }

    /// Up to `n` smooth curves spread evenly over the candidate range.
    pub fn sample(&self, n: usize) -> Vec<Curve> {
        let total = self.candidate_count();
        let stride = (total / (4 * n as u64).max(1)).max(1);
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(n);
        let ids = (0..total).step_by(stride as usize).chain(0..total);
        for id in ids {
            if out.len() == n {
                break;
            }
            if !seen.insert(id) {
                continue;
            }
            let curve = self.candidate(id);
            if self.is_smooth(&curve) {
                out.push(curve);
            }
        }
        out
    }
}

#[inline]
fn eval<const N: usize>(field: &Field, coeffs: &[Element; N], x: Element) -> Element {
    coeffs
        .iter()
        .rev()
        .fold(Element::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
}

fn count_odd(field: &Field, f: &[Element; 7]) -> i64 {
    let mut n: i64 = field
        .elements()
        .map(|x| 1 + field.character_unchecked(eval(field, f, x)) as i64)
        .sum();
    n += if f[6].is_zero() {
        1
    } else {
        1 + field.character_unchecked(f[6]) as i64
    };
    n
}

/// Solutions of `v^2 + hv = c`: 1 if `h = 0`, else 2 or 0 by the trace of
/// `c / h^2`.
#[inline]
fn artin_schreier_count(field: &Field, h: Element, c: Element) -> i64 {
    if h.is_zero() {
        return 1;
    }
    let ratio = field.mul(c, field.inv(field.square(h)).expect("nonzero"));
    if field.character_unchecked(ratio) == 0 {
        2
    } else {
        0
    }
}

fn count_char2(field: &Field, h: &[Element; 4], f: &[Element; 7]) -> i64 {
    let affine: i64 = field
        .elements()
        .map(|x| artin_schreier_count(field, eval(field, h, x), eval(field, f, x)))
        .sum();
    affine + artin_schreier_count(field, h[3], f[6])
}

/// Whether the affine chart `v^2 + h(u)v = f(u)` has a singular point with
/// `u` in `field`: `h(u) = 0`, `v = sqrt(f(u))` and `h'(u)v + f'(u) = 0`.
fn chart_singular_in<const H: usize, const F: usize>(
    field: &Field,
    h: &[Element; H],
    f: &[Element; F],
) -> bool {
    let dh = poly::derivative(field, h);
    let df = poly::derivative(field, f);
    field.elements().any(|u| {
        if !eval(field, h, u).is_zero() {
            return false;
        }
        let v = field
            .sqrt_char2(eval(field, f, u))
            .expect("characteristic 2");
        let partial = field.add(
            field.mul(poly::eval(field, &dh, u), v),
            poly::eval(field, &df, u),
        );
        partial.is_zero()
    })
}

fn reversed<const N: usize>(c: &[Element; N]) -> [Element; N] {
    let mut out = *c;
    out.reverse();
    out
}

fn smooth_char2_in(census: &Census, h: &[Element; 4], f: &[Element; 7]) -> bool {
    if h.iter().all(|c| c.is_zero()) {
        return false;
    }
    // Roots of the cubics h(x) and H(1, w) lie in F_{q^2} or F_{q^3}.
    let (h_rev, f_rev) = (reversed(h), reversed(f));
    [census.field(2), census.field(3)]
        .into_iter()
        .all(|field| !chart_singular_in(field, h, f) && !chart_singular_in(field, &h_rev, &f_rev))
}

/// Smoothness of `Y^2 + H(X,Z)Y = F(X,Z)` in `P(1,3,1)` over `F_q`, `q`
/// even. `h = 0` is never smooth.
pub fn smoothness_char2(q: i64, h: &[Element; 4], f: &[Element; 7]) -> Result<bool> {
    let pp = PrimePower::new(q)?;
    if pp.p() != 2 {
        return Err(Error::OddCharacteristic);
    }
    let base = base_field(2, pp.m())?;
    let census = Census {
        q: pp,
        fields: [base.clone(), extend(&base, 2)?, extend(&base, 3)?],
    };
    Ok(smooth_char2_in(&census, h, f))
}

/// Same test, scanning every `u` in a single field that contains all roots
/// of both cubics (e.g. `F_{q^6}`).
pub fn smoothness_char2_in_field(field: &Field, h: &[Element; 4], f: &[Element; 7]) -> bool {
    if h.iter().all(|c| c.is_zero()) {
        return false;
    }
    !chart_singular_in(field, h, f) && !chart_singular_in(field, &reversed(h), &reversed(f))
}

/// All smooth models over `F_q`, in candidate order.
pub fn enumerate_curves(q: i64, allow_opt_in: bool) -> Result<Vec<Curve>> {
    let census = Census::new(q, allow_opt_in)?;
    Ok(census.curves().collect())
}

/// `(a, b)` from `N1 = #C(F_q)` and `N2 = #C(F_{q^2})`. Fails if `b` is not
/// an integer or `(a, b)` is not a Weil polynomial, either of which means
/// the counts are wrong.
pub fn weil_from_counts(q: PrimePower, n1: i64, n2: i64) -> Result<(i64, i64)> {
    let qv = q.q();
    let a = n1 - qv - 1;
    let twice_b = a * a - (qv * qv + 1 - n2);
    if twice_b % 2 != 0 {
        return Err(Error::ParityViolation { q: qv, n1, n2 });
    }
    let b = twice_b / 2;
    if !is_admissible(&WeilCoeffs::new(q, a, b)) {
        return Err(Error::InadmissibleCount {
            q: qv,
            n1,
            n2,
            a,
            b,
        });
    }
    Ok((a, b))
}

#[derive(Serialize, Deserialize)]
struct CacheHeader {
    q: i64,
    p: i64,
    m: u32,
    models: u64,
    version: u32,
}

#[derive(Serialize, Deserialize)]
struct CacheLine {
    a: i64,
    b: i64,
    count: u64,
}

/// One JSON-lines file per `q`: a header line, then one line per realized
/// class sorted by `(a, b)`.
#[derive(Clone, Debug)]
pub struct CensusCache {
    dir: PathBuf,
}

impl CensusCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn path(&self, q: i64) -> PathBuf {
        self.dir.join(format!("census-q{q}.jsonl"))
    }

    pub fn encode(set: &CensusSet) -> String {
        let header = CacheHeader {
            q: set.q.q(),
            p: set.q.p(),
            m: set.q.m(),
            models: set.models,
            version: CACHE_VERSION,
        };
        let mut out = serde_json::to_string(&header).expect("serializable");
        out.push('\n');
        for (&(a, b), &count) in &set.classes {
            out.push_str(&serde_json::to_string(&CacheLine { a, b, count }).expect("serializable"));
            out.push('\n');
        }
        out
    }

    pub fn decode(path: &Path, text: &str, q: PrimePower) -> Result<CensusSet> {
        let bad = |reason: String| Error::CacheFormat {
            path: path.to_owned(),
            reason,
        };
        let mut lines = text.lines();
        let header: CacheHeader = serde_json::from_str(lines.next().unwrap_or(""))
            .map_err(|e| bad(format!("header: {e}")))?;
        if (header.q, header.p, header.m, header.version) != (q.q(), q.p(), q.m(), CACHE_VERSION) {
            return Err(bad("header does not match".into()));
        }
        let mut classes = BTreeMap::new();
        let mut last = None;
        for line in lines {
            let rec: CacheLine =
                serde_json::from_str(line).map_err(|e| bad(format!("record: {e}")))?;
            if last.is_some_and(|prev| prev >= (rec.a, rec.b)) {
                return Err(bad("records not strictly sorted".into()));
            }
            last = Some((rec.a, rec.b));
            classes.insert((rec.a, rec.b), rec.count);
        }
        if classes.values().sum::<u64>() != header.models {
            return Err(bad("counts do not sum to the model total".into()));
        }
        Ok(CensusSet {
            q,
            models: header.models,
            classes,
        })
    }

    /// The cached set for `q`, or `None` if there is no valid cache file.
    pub fn load(&self, q: PrimePower) -> Option<CensusSet> {
        let path = self.path(q.q());
        let text = fs::read_to_string(&path).ok()?;
        Self::decode(&path, &text, q).ok()
    }

    pub fn store(&self, set: &CensusSet) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path(set.q.q());
        let tmp = path.with_extension("jsonl.tmp");
        let mut file = fs::File::create(&tmp)?;
        file.write_all(Self::encode(set).as_bytes())?;
        file.sync_all()?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }
}

/// The set of `(a, b)` realized by genus-2 curves over `F_q`, read from
/// the cache when possible and written back after a fresh run.
pub fn census_weil_set(q: i64, options: &CensusOptions) -> Result<CensusSet> {
    let census = Census::new(q, options.allow_opt_in)?;
    let cache = options.cache_dir.as_ref().map(CensusCache::new);
    if let (Some(cache), false) = (&cache, options.force) {
        if let Some(set) = cache.load(census.q()) {
            return Ok(set);
        }
    }
    let set = match options.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool")
            .install(|| census.run())?,
        None => census.run()?,
    };
    if let Some(cache) = &cache {
        cache.store(&set)?;
    }
    Ok(set)
}

/// Admissible `(a, b)` over `F_q` whose class contains a Jacobian.
pub fn jacobian_weil_set(q: PrimePower) -> BTreeSet<(i64, i64)> {
    crate::classify::bound_rectangle(q)
        .filter(|&(a, b)| {
            let w = WeilCoeffs::new(q, a, b);
            is_admissible(&w) && is_jacobian(&w).expect("admissible")
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub q: i64,
    pub models: u64,
    pub realized: usize,
    pub predicted: usize,
    pub zeta_checked: usize,
}

/// Checks a census result: the realized set equals the predicted Jacobian
/// set, every realized class is admissible, and `N3` of sampled curves
/// matches the prediction from their `(a, b)`.
pub fn verify_census(census: &Census, set: &CensusSet) -> Result<CensusReport> {
    let q = census.q();
    let mut failures = Vec::new();

    let predicted = jacobian_weil_set(q);
    let realized = set.weil_set();
    for (a, b) in realized.difference(&predicted) {
        failures.push(format!("realized but not predicted: (a={a}, b={b})"));
    }
    for (a, b) in predicted.difference(&realized) {
        failures.push(format!("predicted but not realized: (a={a}, b={b})"));
    }
    for &(a, b) in &realized {
        if !is_admissible(&WeilCoeffs::new(q, a, b)) {
            failures.push(format!("inadmissible census class (a={a}, b={b})"));
        }
    }

    let sample = census.sample(ZETA_SAMPLE);
    for curve in &sample {
        let rec = census.record(*curve)?;
        let n3 = census.count_points(curve, 3);
        let expected = predicted_curve_count(&WeilCoeffs::new(q, rec.a, rec.b), 3);
        if n3 != expected {
            let curve_json = serde_json::to_string(curve).expect("serializable");
            failures.push(format!("N3={n3} but predicted {expected} for {curve_json}"));
        }
    }

    if !failures.is_empty() {
        return Err(Error::VerificationFailure { q: q.q(), failures });
    }
    Ok(CensusReport {
        q: q.q(),
        models: set.models,
        realized: realized.len(),
        predicted: predicted.len(),
        zeta_checked: sample.len(),
    })
}
