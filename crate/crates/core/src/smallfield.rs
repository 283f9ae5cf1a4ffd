//! Small finite fields `F_{p^n}` built as towers, with table-driven
//! arithmetic.
//!
//! An element of an extension `L = K[x]/(f)` of degree `k` over a field `K`
//! of order `r` is encoded as the integer `sum c_i r^i`, where `c_i` are the
//! encodings of its coordinates in `K`. Unwinding the tower, every encoding
//! is a base-`p` integer whose digits are the coordinates over `F_p`. Two
//! consequences:
//!
//! * the encoding of an element of `K` is also its encoding as a constant of
//!   `L`, so coefficients lift to extensions for free;
//! * addition is digit-wise mod `p` (XOR in characteristic 2).
//!
//! Multiplication goes through discrete log/antilog tables built once from a
//! primitive element. Moduli are the lexicographically first monic
//! irreducible polynomials, checked with Rabin's test.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest total degree over the prime field.
pub const MAX_DEGREE: u32 = 12;
/// Largest field order.
pub const MAX_ORDER: u32 = 1 << 16;
/// Odd-characteristic fields up to this order get a full addition table.
const ADD_TABLE_MAX: u32 = 2200;

/// An element of some [`Field`], identified by its encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(u32);

impl Element {
    pub const ZERO: Element = Element(0);
    pub const ONE: Element = Element(1);

    /// The element with the given encoding. Use [`Field::element`] for a
    /// range-checked version.
    pub const fn new(index: u32) -> Self {
        Element(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl serde::Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u32(self.0)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub struct Field {
    p: u32,
    degree: u32,
    order: u32,
    base: Option<Arc<Field>>,
    /// Monic modulus over `base`, constant term first; empty for `F_p`.
    modulus: Vec<Element>,
    /// `exp[i] = g^i` for `i < 2(order - 1)`.
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u16>>,
    neg: Vec<u32>,
    /// Quadratic character (odd characteristic) or absolute trace
    /// (characteristic 2), per element.
    character: Vec<i8>,
    /// Square roots; characteristic 2 only.
    sqrt: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("degree", &self.degree)
            .field("modulus", &self.modulus)
            .finish()
    }
}

/// `F_{p^m}`, as a degree-`m` extension of `F_p` when `m > 1`.
pub fn base_field(p: u32, m: u32) -> Result<Arc<Field>> {
    let prime = Field::prime(p)?;
    if m == 1 {
        Ok(prime)
    } else {
        extend(&prime, m)
    }
}

/// The degree-`k` extension of `base`.
pub fn extend(base: &Arc<Field>, k: u32) -> Result<Arc<Field>> {
    assert!(k >= 1, "extension degree must be positive");
    let degree = base.degree * k;
    let order = (base.order as u64).checked_pow(k);
    if degree > MAX_DEGREE || order.is_none_or(|n| n > MAX_ORDER as u64) {
        return Err(Error::SizeGuard { p: base.p, degree });
    }
    let modulus = first_irreducible(base, k as usize);
    Ok(Arc::new(Field::build(
        base.p,
        degree,
        Some(base.clone()),
        modulus,
    )))
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Arc<Field>> {
        if !crate::arith::is_prime(p as i64) {
            return Err(Error::NotAPrimePower(p as i64));
        }
        if p > MAX_ORDER {
            return Err(Error::SizeGuard { p, degree: 1 });
        }
        Ok(Arc::new(Field::build(p, 1, None, Vec::new())))
    }

    fn build(p: u32, degree: u32, base: Option<Arc<Field>>, modulus: Vec<Element>) -> Field {
        let order = p.pow(degree);
        let mut field = Field {
            p,
            degree,
            order,
            base,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            add_table: None,
            neg: Vec::new(),
            character: Vec::new(),
            sqrt: Vec::new(),
        };
        field.neg = (0..order)
            .map(|x| field.digitwise(x, 0, |d, _| (p - d) % p))
            .collect();
        if p != 2 && order <= ADD_TABLE_MAX {
            let mut table = Vec::with_capacity((order * order) as usize);
            for x in 0..order {
                for y in 0..order {
                    table.push(field.digitwise(x, y, |d, e| (d + e) % p) as u16);
                }
            }
            field.add_table = Some(table);
        }
        field.build_log_tables();
        field.build_character_tables();
        field
    }

    fn build_log_tables(&mut self) {
        let n = self.order;
        let group = n - 1;
        let primes: Vec<u32> = crate::arith::prime_divisors(group.max(1) as i64)
            .expect("nonzero")
            .into_iter()
            .map(|d| d as u32)
            .collect();
        let generator = (1..n)
            .map(Element)
            .find(|&g| {
                primes
                    .iter()
                    .all(|&l| self.slow_pow(g, (group / l) as u64) != Element::ONE)
            })
            .expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(2 * group as usize);
        let mut log = vec![0u32; n as usize];
        let mut x = Element::ONE;
        for i in 0..group {
            exp.push(x.0);
            log[x.0 as usize] = i;
            x = self.slow_mul(x, generator);
        }
        debug_assert_eq!(x, Element::ONE);
        exp.extend_from_within(..);
        self.exp = exp;
        self.log = log;
    }

    fn build_character_tables(&mut self) {
        let n = self.order;
        if self.p == 2 {
            self.character = (0..n)
                .map(|x| {
                    let mut acc = Element::ZERO;
                    let mut power = Element(x);
                    for _ in 0..self.degree {
                        acc = self.add(acc, power);
                        power = self.mul(power, power);
                    }
                    debug_assert!(acc.0 <= 1);
                    acc.0 as i8
                })
                .collect();
            // n - 1 is odd, so every log can be halved modulo n - 1.
            let group = n - 1;
            self.sqrt = (0..n)
                .map(|x| {
                    if x == 0 {
                        return 0;
                    }
                    let l = self.log[x as usize];
                    let half = if l.is_multiple_of(2) {
                        l / 2
                    } else {
                        (l + group) / 2
                    };
                    self.exp[half as usize]
                })
                .collect();
        } else {
            // The generator is a non-square.
            self.character = (0..n)
                .map(|x| match x {
                    0 => 0,
                    _ if self.log[x as usize].is_multiple_of(2) => 1,
                    _ => -1,
                })
                .collect();
        }
    }

    fn digitwise(&self, x: u32, y: u32, op: impl Fn(u32, u32) -> u32) -> u32 {
        let (mut x, mut y) = (x, y);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.degree {
            out += op(x % self.p, y % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        out
    }

    fn slow_mul(&self, x: Element, y: Element) -> Element {
        match &self.base {
            None => Element(((x.0 as u64 * y.0 as u64) % self.p as u64) as u32),
            Some(base) => {
                let product = poly::mul(base, &self.coords(x), &self.coords(y));
                let reduced = poly::rem(base, &product, &self.modulus);
                self.from_coords(&reduced)
            }
        }
    }

    fn slow_pow(&self, x: Element, mut e: u64) -> Element {
        let (mut acc, mut base) = (Element::ONE, x);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// The field this one was built over; `None` for a prime field.
    pub fn base(&self) -> Option<&Arc<Field>> {
        self.base.as_ref()
    }

    /// Degree over [`Field::base`].
    pub fn relative_degree(&self) -> u32 {
        match &self.base {
            None => 1,
            Some(base) => self.degree / base.degree,
        }
    }

    /// The defining polynomial over [`Field::base`], constant term first.
    pub fn modulus(&self) -> &[Element] {
        &self.modulus
    }

    pub fn zero(&self) -> Element {
        Element::ZERO
    }

    pub fn one(&self) -> Element {
        Element::ONE
    }

    /// All elements, zero first, in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + use<> {
        (0..self.order).map(Element)
    }

    pub fn element(&self, index: u32) -> Option<Element> {
        (index < self.order).then_some(Element(index))
    }

    /// The image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Element {
        Element(n.rem_euclid(self.p as i64) as u32)
    }

    /// A multiplicative generator.
    pub fn generator(&self) -> Element {
        Element(self.exp[1 % self.exp.len().max(1)])
    }

    /// Coordinates over [`Field::base`], constant term first. A prime field
    /// element is its own single coordinate.
    pub fn coords(&self, x: Element) -> Vec<Element> {
        match &self.base {
            None => vec![x],
            Some(base) => {
                let r = base.order;
                let mut v = x.0;
                (0..self.relative_degree())
                    .map(|_| {
                        let c = v % r;
                        v /= r;
                        Element(c)
                    })
                    .collect()
            }
        }
    }

    /// Inverse of [`Field::coords`]; missing high coordinates are zero.
    pub fn from_coords(&self, coords: &[Element]) -> Element {
        let r = self.base.as_ref().map_or(self.order, |b| b.order);
        debug_assert!(coords.len() <= self.relative_degree() as usize);
        Element(coords.iter().rev().fold(0, |acc, c| acc * r + c.0))
    }

    #[inline]
    pub fn add(&self, x: Element, y: Element) -> Element {
        if self.p == 2 {
            return Element(x.0 ^ y.0);
        }
        match &self.add_table {
            Some(table) => Element(table[(x.0 * self.order + y.0) as usize] as u32),
            None => Element(self.digitwise(x.0, y.0, |d, e| (d + e) % self.p)),
        }
    }

    #[inline]
    pub fn neg(&self, x: Element) -> Element {
        Element(self.neg[x.0 as usize])
    }

    #[inline]
    pub fn sub(&self, x: Element, y: Element) -> Element {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Element, y: Element) -> Element {
        if x.0 == 0 || y.0 == 0 {
            return Element::ZERO;
        }
        let l = self.log[x.0 as usize] + self.log[y.0 as usize];
        Element(self.exp[l as usize])
    }

    #[inline]
    pub fn square(&self, x: Element) -> Element {
        self.mul(x, x)
    }

    pub fn inv(&self, x: Element) -> Result<Element> {
        if x.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let group = self.order - 1;
        let l = self.log[x.0 as usize];
        Ok(Element(self.exp[((group - l) % group) as usize]))
    }

    pub fn div(&self, x: Element, y: Element) -> Result<Element> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn pow(&self, x: Element, e: u64) -> Element {
        if e == 0 {
            return Element::ONE;
        }
        if x.0 == 0 {
            return Element::ZERO;
        }
        let group = (self.order - 1) as u64;
        let l = (self.log[x.0 as usize] as u64 * (e % group)) % group;
        Element(self.exp[l as usize])
    }

    /// `-1`, `0` or `1` according to whether `c` is a non-square, zero, or a
    /// nonzero square.
    pub fn quadratic_character(&self, c: Element) -> Result<i8> {
        if self.p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        Ok(self.character[c.0 as usize])
    }

    /// `c + c^2 + c^4 + ... + c^(2^(d-1))` for `|F| = 2^d`.
    pub fn absolute_trace(&self, c: Element) -> Result<u8> {
        if self.p != 2 {
            return Err(Error::OddCharacteristic);
        }
        Ok(self.character[c.0 as usize] as u8)
    }

    /// Quadratic character or absolute trace, whichever fits the
    /// characteristic, without the characteristic check.
    #[inline]
    pub(crate) fn character_unchecked(&self, c: Element) -> i8 {
        self.character[c.0 as usize]
    }

    /// The unique square root in characteristic 2.
    pub fn sqrt_char2(&self, c: Element) -> Result<Element> {
        if self.p != 2 {
            return Err(Error::OddCharacteristic);
        }
        Ok(Element(self.sqrt[c.0 as usize]))
    }
}

/// Lexicographically first monic irreducible polynomial of degree `k` over
/// `base`, constant term first.
fn first_irreducible(base: &Field, k: usize) -> Vec<Element> {
    let r = base.order as u64;
    let count = r.pow(k as u32);
    (0..count)
        .map(|n| {
            let mut v = n;
            let mut f: Vec<Element> = (0..k)
                .map(|_| {
                    let c = v % r;
                    v /= r;
                    Element(c as u32)
                })
                .collect();
            f.push(Element::ONE);
            f
        })
        .find(|f| poly::is_irreducible(base, f))
        .expect("irreducible polynomials exist in every degree")
}

/// Dense polynomials over a [`Field`], constant term first, kept trimmed
/// (no trailing zeros; the zero polynomial is empty).
pub mod poly {
    use super::{Element, Field};

    pub fn trim(mut f: Vec<Element>) -> Vec<Element> {
        while f.last().is_some_and(|c| c.is_zero()) {
            f.pop();
        }
        f
    }

    pub fn degree(f: &[Element]) -> Option<usize> {
        f.iter().rposition(|c| !c.is_zero())
    }

    pub fn eval(field: &Field, f: &[Element], x: Element) -> Element {
        f.iter()
            .rev()
            .fold(Element::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
    }

    pub fn sub(field: &Field, f: &[Element], g: &[Element]) -> Vec<Element> {
        let n = f.len().max(g.len());
        let at = |h: &[Element], i: usize| h.get(i).copied().unwrap_or(Element::ZERO);
        trim((0..n).map(|i| field.sub(at(f, i), at(g, i))).collect())
    }

    pub fn mul(field: &Field, f: &[Element], g: &[Element]) -> Vec<Element> {
        if f.is_empty() || g.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Element::ZERO; f.len() + g.len() - 1];
        for (i, &x) in f.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in g.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(x, y));
            }
        }
        trim(out)
    }

    /// Remainder of `f` modulo a nonzero `g`.
    pub fn rem(field: &Field, f: &[Element], g: &[Element]) -> Vec<Element> {
        let dg = degree(g).expect("division by the zero polynomial");
        let lead_inv = field.inv(g[dg]).expect("nonzero leading coefficient");
        let mut r = trim(f.to_vec());
        while let Some(dr) = degree(&r) {
            if dr < dg {
                break;
            }
            let factor = field.mul(r[dr], lead_inv);
            let shift = dr - dg;
            for (i, &c) in g[..=dg].iter().enumerate() {
                r[i + shift] = field.sub(r[i + shift], field.mul(factor, c));
            }
            r = trim(r);
        }
        r
    }

    pub fn mulmod(field: &Field, f: &[Element], g: &[Element], m: &[Element]) -> Vec<Element> {
        rem(field, &mul(field, f, g), m)
    }

    pub fn powmod(field: &Field, f: &[Element], mut e: u64, m: &[Element]) -> Vec<Element> {
        let mut acc = rem(field, &[Element::ONE], m);
        let mut base = rem(field, f, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(field, &acc, &base, m);
            }
            base = mulmod(field, &base, &base, m);
            e >>= 1;
        }
        acc
    }

    /// Monic greatest common divisor; empty when both inputs are zero.
    pub fn gcd(field: &Field, f: &[Element], g: &[Element]) -> Vec<Element> {
        let (mut a, mut b) = (trim(f.to_vec()), trim(g.to_vec()));
        while !b.is_empty() {
            let r = rem(field, &a, &b);
            a = b;
            b = r;
        }
        if let Some(d) = degree(&a) {
            let inv = field.inv(a[d]).expect("nonzero");
            a.iter_mut().for_each(|c| *c = field.mul(*c, inv));
        }
        a
    }

    pub fn derivative(field: &Field, f: &[Element]) -> Vec<Element> {
        trim(
            f.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| field.mul(field.from_int(i as i64), c))
                .collect(),
        )
    }

    /// `gcd(f, f') = 1` for nonconstant `f`.
    pub fn is_squarefree(field: &Field, f: &[Element]) -> bool {
        degree(&gcd(field, f, &derivative(field, f))) == Some(0)
    }

    /// Rabin's test for a monic `f` of degree `k >= 1`: `f` divides
    /// `x^(r^k) - x` and is coprime to `x^(r^(k/l)) - x` for each prime `l | k`.
    pub fn is_irreducible(field: &Field, f: &[Element]) -> bool {
        let Some(k) = degree(f) else {
            return false;
        };
        if k == 0 {
            return false;
        }
        let r = field.order() as u64;
        let x = [Element::ZERO, Element::ONE];
        // frob[i] = x^(r^i) mod f
        let mut frob = vec![rem(field, &x, f)];
        for _ in 0..k {
            let next = powmod(field, frob.last().expect("nonempty"), r, f);
            frob.push(next);
        }
        if !sub(field, &frob[k], &frob[0]).is_empty() {
            return false;
        }
        let prime_factors = crate::arith::prime_divisors(k as i64).expect("k >= 1");
        prime_factors.into_iter().all(|l| {
            let h = sub(field, &frob[k / l as usize], &frob[0]);
            degree(&gcd(field, f, &h)) == Some(0)
        })
    }
}
