//! The twisted calculus: star product, bracket, pairing, dual frames and
//! the twisted involution, plus the golden relation suites.

pub mod suites;

use std::sync::Arc;

use crate::calculus::{CalcElement, Frame};
use crate::error::{Error, Result};
use crate::expr::{parse, ExprContext};
use crate::hopf::{LieAlgebra, Uea};
use crate::report::Check;
use crate::scalar::{Scalar, Surds};
use crate::twist::{PairOp, TwistSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Weight-decomposed Jordanian evaluation; results are exact in `nu`.
    Exact,
    /// Twist legs from the series truncated at its order.
    Truncated,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "truncated" => Ok(Mode::Truncated),
            _ => Err(Error::Config(format!("unknown mode '{s}'"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct StarContext {
    twist: Arc<TwistSeries>,
    mode: Mode,
    unitary: bool,
}

/// `<X, omega> = sum_i X^i omega_i` for a vector field and a one-form.
pub fn classical_pairing(x: &CalcElement, omega: &CalcElement) -> Result<CalcElement> {
    let xs = x.vector_components().ok_or_else(|| Error::Type("pairing needs a vector field on the left".into()))?;
    let ws = omega.form_components().ok_or_else(|| Error::Type("pairing needs a one-form on the right".into()))?;
    let mut out = x.zero_like();
    for (a, b) in xs.iter().zip(&ws) {
        out += &(a * b);
    }
    Ok(out)
}

impl StarContext {
    pub fn new(twist: Arc<TwistSeries>, mode: Mode) -> Result<Self> {
        if mode == Mode::Exact && twist.exact().is_none() {
            return Err(Error::Config("exact mode needs a Jordanian twist with diagonal H".into()));
        }
        let unitary = twist.check_unitary().passed();
        Ok(StarContext { twist, mode, unitary })
    }

    /// The Jordanian twist on the hyperboloid symmetry algebra.
    pub fn hyperboloid(surds: &Arc<Surds>, order: u32, mode: Mode) -> Result<Self> {
        let lie = Arc::new(LieAlgebra::sl2(surds));
        let (h, e) = (lie.index_of("H").expect("H"), lie.index_of("E+").expect("E+"));
        Self::new(Arc::new(TwistSeries::jordanian(lie, h, e, order)?), mode)
    }

    pub fn twist(&self) -> &Arc<TwistSeries> {
        &self.twist
    }

    pub fn lie(&self) -> &Arc<LieAlgebra> {
        self.twist.lie()
    }

    pub fn surds(&self) -> &Arc<Surds> {
        self.lie().surds()
    }

    pub fn frame(&self) -> Frame {
        self.lie().frame()
    }

    pub fn dim(&self) -> usize {
        self.lie().ambient_dim()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn order(&self) -> u32 {
        self.twist.order()
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    fn exact(&self) -> bool {
        self.mode == Mode::Exact
    }

    /// Truncation applied to products: none in exact mode.
    pub fn trunc(&self) -> Option<u32> {
        (!self.exact()).then_some(self.twist.order())
    }

    fn check(&self, a: &CalcElement) -> Result<()> {
        if a.frame() != self.frame() || a.dim() != self.dim() {
            return Err(Error::Frame(format!(
                "context works in {:?} dimension {}, element is {:?} dimension {}",
                self.frame(),
                self.dim(),
                a.frame(),
                a.dim()
            )));
        }
        Ok(())
    }

    pub fn pairs(&self, op: PairOp, a: &CalcElement, b: &CalcElement) -> Result<Vec<(CalcElement, CalcElement)>> {
        self.check(a)?;
        self.check(b)?;
        self.twist.apply2(op, a, b, self.exact())
    }

    /// `a * b = (F-bar_1 |> a)(F-bar_2 |> b)`.
    pub fn star(&self, a: &CalcElement, b: &CalcElement) -> Result<CalcElement> {
        let mut out = a.zero_like();
        for (x, y) in self.pairs(PairOp::FInv, a, b)? {
            out += &x.try_mul(&y, self.trunc())?;
        }
        Ok(out)
    }

    /// Left-nested star product of several factors.
    pub fn star_all(&self, factors: &[CalcElement]) -> Result<CalcElement> {
        let (first, rest) = factors.split_first().ok_or_else(|| Error::Config("empty product".into()))?;
        rest.iter().try_fold(first.clone(), |acc, f| self.star(&acc, f))
    }

    /// `u |> a`, truncated at the context order.
    pub fn act(&self, u: &Uea, a: &CalcElement) -> Result<CalcElement> {
        self.lie().act(u, a, Some(self.order()))
    }

    /// `[X, Y]_* = [F-bar_1 |> X, F-bar_2 |> Y]`.
    pub fn bracket(&self, x: &CalcElement, y: &CalcElement) -> Result<CalcElement> {
        if !x.is_vector_field() || !y.is_vector_field() {
            return Err(Error::Type("star bracket needs vector fields".into()));
        }
        let mut out = x.zero_like();
        for (a, b) in self.pairs(PairOp::FInv, x, y)? {
            out += &a.try_mul(&b, self.trunc())?;
            out -= &b.try_mul(&a, self.trunc())?;
        }
        Ok(out)
    }

    /// `X * Y - (R-bar_1 |> Y) * (R-bar_2 |> X)`, restricted to derivative
    /// degree one. Agrees with [`bracket`](Self::bracket).
    pub fn bracket_via_braiding(&self, x: &CalcElement, y: &CalcElement) -> Result<CalcElement> {
        let mut out = self.star(x, y)?;
        for (a, b) in self.pairs(PairOp::RInv, y, x)? {
            out -= &self.star(&a, &b)?;
        }
        Ok(out.d_degree_part(1))
    }

    /// `<X, omega>_* = <F-bar_1 |> X, F-bar_2 |> omega>`.
    pub fn pairing(&self, x: &CalcElement, omega: &CalcElement) -> Result<CalcElement> {
        let mut out = x.zero_like();
        for (a, b) in self.pairs(PairOp::FInv, x, omega)? {
            out += &classical_pairing(&a, &b)?;
        }
        Ok(match self.trunc() {
            Some(n) => out.truncate(n),
            None => out,
        })
    }

    /// `S(beta) |> a`.
    pub fn s_beta(&self, a: &CalcElement) -> Result<CalcElement> {
        self.check(a)?;
        self.twist.s_beta_act(a, self.exact())
    }

    /// The star-dual frames `d'_i = S(beta) |> d_i` and `xi^i`.
    pub fn dual_frame(&self) -> Result<(Vec<CalcElement>, Vec<CalcElement>)> {
        let (f, n) = (self.frame(), self.dim());
        let ds = (0..n).map(|i| self.s_beta(&CalcElement::d(f, n, i))).collect::<Result<Vec<_>>>()?;
        let xis = (0..n).map(|i| CalcElement::xi(f, n, i)).collect();
        Ok((ds, xis))
    }

    /// `a^{*_star} = S(beta) |> a^*`; defined for unitary twists.
    pub fn involution(&self, a: &CalcElement) -> Result<CalcElement> {
        if !self.unitary {
            return Err(Error::Unsupported("twisted involution needs a unitary twist".into()));
        }
        self.s_beta(&a.involution())
    }

    /// `b * a = (-1)^{|a||b|} (R-bar_1 |> a) * (R-bar_2 |> b)` for elements
    /// of derivative degree zero (or commuting pairs in general).
    pub fn braided_commutativity(&self, id: &str, a: &CalcElement, b: &CalcElement) -> Result<Check> {
        let sign = match (a.form_degree(), b.form_degree()) {
            (Some(p), Some(q)) if p * q % 2 == 1 => Scalar::from_int(-1),
            (Some(_), Some(_)) => Scalar::one(),
            _ => return Err(Error::Type("braided commutativity needs homogeneous form degrees".into())),
        };
        let lhs = self.star(b, a)?;
        let mut rhs = a.zero_like();
        for (x, y) in self.pairs(PairOp::RInv, a, b)? {
            rhs += &self.star(&x, &y)?;
        }
        let rhs = rhs.scale(&sign);
        Ok(Check::elements(id, &self.cut(&lhs), &self.cut(&rhs)))
    }

    /// Truncate to the context order in truncated mode.
    pub fn cut(&self, a: &CalcElement) -> CalcElement {
        match self.trunc() {
            Some(n) => a.truncate(n),
            None => a.clone(),
        }
    }

    /// Parser context in which `*` is this star product and `c` stays
    /// symbolic.
    pub fn expr_context(&self) -> ExprContext<'_> {
        let base = match self.frame() {
            Frame::Weight => ExprContext::new(self.surds().clone()),
            Frame::Cartesian => ExprContext::cartesian(self.surds().clone(), self.dim()),
        };
        base.with_star(move |a, b| self.star(a, b))
    }

    pub fn parse(&self, src: &str) -> Result<CalcElement> {
        parse(src, &self.expr_context())
    }

    /// `h |> (a * b)` against `sum (h_(1) |> a) * (h_(2) |> b)` with the
    /// twisted coproduct.
    pub fn module_algebra_check(&self, id: &str, h: &Uea, a: &CalcElement, b: &CalcElement) -> Result<Check> {
        let lhs = self.act(h, &self.star(a, b)?)?;
        let delta = self.twist.twisted_coproduct(h);
        let mut rhs = a.zero_like();
        for (legs, c) in delta.terms() {
            let x = self.lie().act_mono(&legs[0], a);
            if x.is_zero() {
                continue;
            }
            let y = self.lie().act_mono(&legs[1], b);
            if y.is_zero() {
                continue;
            }
            rhs += &self.star(&x.scale(c), &y)?;
        }
        let n = self.order();
        Ok(Check::elements(id, &lhs.truncate(n), &rhs.truncate(n)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{MINUS, PLUS, ZERO};

    fn ctx(a: i64, mode: Mode) -> StarContext {
        StarContext::hyperboloid(&Surds::from_ints(a, 1), 6, mode).unwrap()
    }

    #[test]
    fn generator_products() {
        for mode in [Mode::Exact, Mode::Truncated] {
            let c = ctx(1, mode);
            assert_eq!(c.parse("y+ * y-").unwrap().to_string(), "y+ y- + 2*I*nu*sqrtA*y+ y0 + 2*nu^2*y+^2");
            let s = c.parse("y+ * y0").unwrap();
            assert_eq!(s, c.parse("y+ y0 - I*nu/sqrtA * y+^2").unwrap());
            assert_eq!(c.parse("x0 * y+").unwrap().to_string(), "y+");
        }
    }

    #[test]
    fn dual_frame_pairs_to_delta() {
        let c = ctx(2, Mode::Exact);
        let (ds, xis) = c.dual_frame().unwrap();
        for (i, d) in ds.iter().enumerate() {
            for (j, xi) in xis.iter().enumerate() {
                let p = c.pairing(d, xi).unwrap();
                let want = if i == j { CalcElement::one(Frame::Weight, 3) } else { p.zero_like() };
                assert_eq!(p, want, "<d'_{i}, xi^{j}>");
            }
        }
    }

    #[test]
    fn pairing_example() {
        let c = ctx(1, Mode::Exact);
        let x = c.parse("y+ * d0").unwrap();
        let eta = c.parse("eta0").unwrap();
        assert_eq!(c.pairing(&x, &eta).unwrap(), c.parse("y+").unwrap());
    }

    #[test]
    fn involution_values() {
        let c = ctx(3, Mode::Exact);
        let ym = CalcElement::x(Frame::Weight, 3, MINUS);
        let want = c.parse("y- - 2*I*nu*sqrtA y0").unwrap();
        assert_eq!(c.involution(&ym).unwrap(), want);
        let yp = CalcElement::x(Frame::Weight, 3, PLUS);
        assert_eq!(c.involution(&yp).unwrap(), yp);
        let twice = c.involution(&c.involution(&ym).unwrap()).unwrap();
        assert_eq!(twice, ym);
    }

    #[test]
    fn brackets_agree() {
        for mode in [Mode::Exact, Mode::Truncated] {
            let c = ctx(2, mode);
            let h = c.parse("H").unwrap();
            let e = c.parse("E+").unwrap();
            let em = c.parse("E-").unwrap();
            assert_eq!(c.bracket(&h, &e).unwrap(), e.scale(&Scalar::from_int(2)));
            assert!(c.bracket(&e, &e).unwrap().is_zero());
            for (x, y) in [(&h, &em), (&em, &e), (&e, &em)] {
                assert_eq!(c.bracket(x, y).unwrap(), c.bracket_via_braiding(x, y).unwrap());
            }
        }
    }

    #[test]
    fn braided_commutativity_samples() {
        let c = ctx(1, Mode::Exact);
        let y = |i| CalcElement::x(Frame::Weight, 3, i);
        let eta = |i| CalcElement::xi(Frame::Weight, 3, i);
        assert!(c.braided_commutativity("y+y0", &y(PLUS), &y(ZERO)).unwrap().passed());
        assert!(c.braided_commutativity("eta+eta+", &eta(PLUS), &eta(PLUS)).unwrap().passed());
        assert!(c.star(&eta(PLUS), &eta(PLUS)).unwrap().is_zero());
    }

    #[test]
    fn exact_mode_rejects_abelian() {
        let lie = Arc::new(LieAlgebra::sl2(&Surds::unit()));
        let t = Arc::new(TwistSeries::identity(lie, 3));
        assert!(StarContext::new(t.clone(), Mode::Exact).is_err());
        assert!(StarContext::new(t, Mode::Truncated).is_ok());
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use crate::calculus::Monomial;
    use crate::scalar::proptests::scalar;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn exact() -> &'static StarContext {
        static CTX: OnceLock<StarContext> = OnceLock::new();
        CTX.get_or_init(|| StarContext::hyperboloid(&Surds::from_ints(2, 3), 6, Mode::Exact).unwrap())
    }

    fn truncated() -> &'static StarContext {
        static CTX: OnceLock<StarContext> = OnceLock::new();
        CTX.get_or_init(|| StarContext::hyperboloid(&Surds::from_ints(2, 3), 6, Mode::Truncated).unwrap())
    }

    /// Weight-frame monomial of total degree at most `max`.
    fn monomial(max: u16) -> impl Strategy<Value = CalcElement> {
        (prop::array::uniform3(0u16..=2), prop::array::uniform3(0u16..=2), 0u8..8, -3i64..=3, 1i64..=2)
            .prop_filter("degree", move |(x, d, xi, n, _)| {
                *n != 0 && x.iter().sum::<u16>() + d.iter().sum::<u16>() + xi.count_ones() as u16 <= max
            })
            .prop_map(|(x, d, xi, n, q)| {
                let mut m = Monomial::ONE;
                m.x[..3].copy_from_slice(&x);
                m.d[..3].copy_from_slice(&d);
                m.xi = xi;
                CalcElement::monomial(Frame::Weight, 3, m, Scalar::from_ratio(n, q))
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn associative(a in monomial(3), b in monomial(3), c in monomial(3)) {
            let ctx = exact();
            let lhs = ctx.star(&ctx.star(&a, &b).unwrap(), &c).unwrap();
            let rhs = ctx.star(&a, &ctx.star(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(ctx.cut(&lhs), ctx.cut(&rhs));
        }

        #[test]
        fn unital_and_bilinear(a in monomial(3), b in monomial(3), c in monomial(3), k in scalar()) {
            let ctx = exact();
            let one = CalcElement::one(Frame::Weight, 3);
            prop_assert_eq!(ctx.star(&one, &a).unwrap(), a.clone());
            prop_assert_eq!(ctx.star(&a, &one).unwrap(), a.clone());
            let lhs = ctx.star(&a, &(&b + &c.scale(&k))).unwrap();
            let rhs = &ctx.star(&a, &b).unwrap() + &ctx.star(&a, &c).unwrap().scale(&k);
            prop_assert_eq!(ctx.cut(&lhs), ctx.cut(&rhs));
        }

        #[test]
        fn exact_matches_truncated(a in monomial(4), b in monomial(4)) {
            // the exact series is finite here but may run past the order
            let e = exact().star(&a, &b).unwrap().map_coefficients(|c| c.truncate(6));
            prop_assert_eq!(e, truncated().star(&a, &b).unwrap());
        }

        #[test]
        fn classical_limit(a in monomial(3), b in monomial(3)) {
            let ctx = exact();
            let s = ctx.cut(&ctx.star(&a, &b).unwrap()).map_coefficients(|c| c.truncate(0));
            prop_assert_eq!(s, &a * &b);
        }
    }
}
