// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <numbers>

#include "superloc/error.hpp"
#include "superloc/residue.hpp"
#include "superloc/scenario.hpp"
#include "support.hpp"

using namespace superloc;
using superloc::test::Gen;
using T = FormGen::Type;

namespace {

const Complex kTwoPiOverI(0.0, -2.0 * std::numbers::pi);

SingularPoint origin(int n) { return {std::vector<Complex>(static_cast<std::size_t>(n)), 0}; }

BodyExpr linear(const std::vector<Complex>& a) {
  std::vector<BodyExpr> t;
  for (std::size_t k = 0; k < a.size(); ++k) t.push_back(BodyExpr(a[k]) * BodyExpr::var(static_cast<int>(k) + 1));
  return BodyExpr::sum(t);
}

// g_i linear with an invertible Gaussian-integer matrix.
std::vector<SuperFunction> random_g(Gen& g, int n, Complex* det_out = nullptr) {
  for (;;) {
    std::vector<std::vector<Complex>> a(static_cast<std::size_t>(n), std::vector<Complex>(static_cast<std::size_t>(n)));
    for (auto& row : a)
      for (auto& c : row) c = g.gaussian_int(2);
    // det by permutations
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    Complex det{};
    do {
      Complex t = static_cast<double>(test::bubble_sign(perm));
      for (int i = 0; i < n; ++i) t *= a[static_cast<std::size_t>(i)][static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
      det += t;
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (std::abs(det) < 0.5) continue;
    if (det_out) *det_out = det;
    std::vector<SuperFunction> out;
    for (const auto& row : a) out.push_back(SuperFunction::body(n, n, linear(row)));
    return out;
  }
}

// f_i = sum_j c_ij xi_j (1 + z_i): D body at 0 is (c_ji).
std::vector<SuperFunction> random_f(Gen& g, int n) {
  std::vector<SuperFunction> f;
  for (int i = 1; i <= n; ++i) {
    SuperFunction fi(n, n);
    for (int j = 1; j <= n; ++j) {
      fi.add_term(MultiIndex::from_labels({j}, n), {},
                  BodyExpr(g.complex() + (i == j ? 3.0 : 0.0)) * (BodyExpr(1.0) + BodyExpr::var(i)));
    }
    f.push_back(fi);
  }
  return f;
}

// eta with top coefficients on the (0,0)|(n,n) and every hatted (1,0)|(n-1,n)
// monomial, so the parity hypothesis holds.
SuperForm random_eta(Gen& g, int n) {
  const auto full = MultiIndex::full(n);
  SuperForm eta = SuperForm::monomial(eta_00_monomial(n), SuperFunction::monomial(n, n, full, full, test::random_expr(g, n, 3)));
  for (int j = 1; j <= n; ++j) {
    eta += SuperForm::monomial(eta_10_monomial(n, j), SuperFunction::monomial(n, n, full, full, test::random_expr(g, n, 3)));
  }
  return eta;
}

Complex numerator_at_origin(const SuperForm& eta, int n) {
  const auto full = MultiIndex::full(n);
  const std::vector<Complex> z(static_cast<std::size_t>(n));
  return eta_00_nn(eta, full, full).eval_complex(z) + eta_10_hat_star(eta, full, full).eval_complex(z);
}

Scenario fixture(const std::string& name) { return load_scenario(test::fixture(name)); }

template <class F>
std::string invariant_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.invariant();
  }
  return "";
}

}  // namespace

TEST_SUITE("residue") {

TEST_CASE("jacobian determinants") {
  const auto p11 = fixture("p1-1.json");
  CHECK(jacobian_det(p11.field, p11.points[0]).is_one());
  const auto p22 = fixture("p2-2.json");
  CHECK(jacobian_det(p22.field, p22.points[0]).is_one());
  const int n = 2;
  const SuperVectorField v(n, n, {SuperFunction(n, n), SuperFunction(n, n)},
                           {SuperFunction::body(n, n, BodyExpr(2.0) * BodyExpr::var(1)),
                            SuperFunction::body(n, n, BodyExpr(3.0) * BodyExpr::var(2))});
  CHECK(jacobian_det(v, origin(n)).value() == Complex(6.0));
}

TEST_CASE("berezinian of the field") {
  const auto p11 = fixture("p1-1.json");
  CHECK(invariant_of([&] { (void)berezinian_of_field(p11.field, p11.points[0].z); }) == "berezinian-defined");
  const BodyExpr z = BodyExpr::var(1);
  const SuperVectorField v(1, 1, {SuperFunction::xi(1, 1, 1).scaled(z)}, {SuperFunction::body(1, 1, z)});
  CHECK(berezinian_of_field(v, std::vector<Complex>{1.0}) == GrassmannValue::scalar(2, 1.0));
}

TEST_CASE("Ber times det D equals det JV on random theorem-mode fields") {
  Gen g(71);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = g.integer(1, 3);
    Complex det{};
    const SuperVectorField v(n, n, random_f(g, n), random_g(g, n, &det));
    const auto p = test::random_point(g, n);
    const auto jac = super_jacobian(v, p);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) CHECK(jac.c.at(r, c).is_zero());
    const auto prod = gr_mul(berezinian_of_field(v, p), even_det(jac.d));
    CHECK(max_abs_diff(prod, GrassmannValue::scalar(2 * n, det)) < 1e-12);
  }
}

TEST_CASE("simple residue on the projective line fixture is exactly one") {
  const auto s = fixture("p1-1.json");
  const auto r = residue_simple(s.field, s.form, s.points[0], HypothesisMode::kStrict);
  CHECK(r.value.is_one());
  CHECK(r.complex() == Complex(1.0, 0.0));
  CHECK(r.hypothesis.checked);
  CHECK(r.hypothesis.satisfied);
}

TEST_CASE("simple residue hand evaluations") {
  const int n = 1;
  const SuperVectorField v(n, n, {SuperFunction(n, n)}, {SuperFunction::body(n, n, BodyExpr(2.0) * BodyExpr::var(1))});
  // dz ^ dxibar xi xibar (i/pi)
  const auto f = SuperFunction::monomial(n, n, MultiIndex::full(n), MultiIndex::full(n), BodyExpr(TauScalar(-2.0, -1)));
  const auto eta = SuperForm::word(n, n, {{T::kDz, 1}, {T::kDxibar, 1}}, f);
  const auto r = residue_simple(v, eta, origin(n), HypothesisMode::kFZero);
  const Complex oracle = kTwoPiOverI * Complex(0.0, 1.0 / std::numbers::pi) / 2.0;
  CHECK(std::abs(r.complex() - oracle) < 1e-15);
  CHECK(r.value.is_one());

  const SuperForm zero_components =
      SuperForm::word(n, n, {{T::kDz, 1}, {T::kDzbar, 1}}, SuperFunction::body(n, n, BodyExpr(1.0)));
  CHECK(residue_simple(v, zero_components, origin(n), HypothesisMode::kFZero).value.is_zero());
}

TEST_CASE("residue_ber agrees with residue_simple") {
  Gen g(72);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = g.integer(1, 3);
    const SuperVectorField v(n, n, random_f(g, n), random_g(g, n));
    const auto eta = random_eta(g, n);
    const auto simple = residue_simple(v, eta, origin(n), HypothesisMode::kStrict);
    const Complex ber = residue_ber(v, eta, origin(n), HypothesisMode::kStrict);
    CHECK(std::abs(simple.complex() - ber) <= 1e-12 * std::max(1.0, std::abs(ber)));
  }
  // singular D
  const auto s = fixture("p1-1.json");
  CHECK_THROWS_AS(residue_ber(s.field, s.form, s.points[0], HypothesisMode::kStrict), MathDomainError);
}

TEST_CASE("residue_ber with det D = 1 divides by Ber alone") {
  const int n = 1;
  const BodyExpr z = BodyExpr::var(1);
  // f = xi (1 + z), g = 4 z: D = 1, Ber = 4 at the origin
  const SuperVectorField v(n, n, {SuperFunction::xi(n, n, 1).scaled(BodyExpr(1.0) + z)},
                           {SuperFunction::body(n, n, BodyExpr(4.0) * z)});
  Gen g(73);
  const auto eta = random_eta(g, n);
  const auto ber = berezinian_of_field(v, origin(n).z);
  const Complex expected = kTwoPiOverI * numerator_at_origin(eta, n) / ber.body();
  CHECK(std::abs(residue_ber(v, eta, origin(n), HypothesisMode::kStrict) - expected) < 1e-12 * std::abs(expected));
}

TEST_CASE("residues are linear in eta") {
  Gen g(74);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = g.integer(1, 3);
    const SuperVectorField v(n, n, random_f(g, n), random_g(g, n));
    const auto a = random_eta(g, n);
    const auto b = random_eta(g, n);
    const Complex c = g.gaussian_int();
    const Complex lhs = residue_simple(v, a + b.scaled(BodyExpr(c)), origin(n), HypothesisMode::kStrict).complex();
    const Complex rhs = residue_simple(v, a, origin(n), HypothesisMode::kStrict).complex() +
                        c * residue_simple(v, b, origin(n), HypothesisMode::kStrict).complex();
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("general residue on the projective plane fixture is exactly one") {
  const auto s = fixture("p2-2.json");
  REQUIRE(s.decompositions[0].has_value());
  const auto r = residue_general(s.field, s.form, s.points[0], *s.decompositions[0]);
  CHECK(r.value.is_one());
  CHECK(r.complex() == Complex(1.0, 0.0));
  // The component that carries it: eta00(2; 12) = omega^2 / 2 at the origin.
  const auto full = MultiIndex::full(2);
  const auto mu = MultiIndex::from_labels({2}, 2);
  const auto half = eta_00_nn(s.form, mu, full).eval(s.points[0].z);
  CHECK(half.value() == TauScalar(Complex(-2.0), -2).value() / 2.0);
}

TEST_CASE("general residue with vanishing a reduces to the simple formula") {
  Gen g(75);
  const int n = 2;
  for (int trial = 0; trial < 20; ++trial) {
    const auto gs = random_g(g, n);
    const Complex b1 = g.gaussian_int(), b2 = g.gaussian_int();
    const auto x1 = SuperFunction::xi(n, n, 1), x2 = SuperFunction::xi(n, n, 2);
    const SuperVectorField v(n, n, {sf_mul(x2, gs[1]).scaled(BodyExpr(b1)), sf_mul(x1, gs[0]).scaled(BodyExpr(b2))}, gs);
    const Decomposition dec = {{{MultiIndex::from_labels({2}, n), 0.0, b1, 2}},
                               {{MultiIndex::from_labels({1}, n), 0.0, b2, 1}}};
    const auto eta = random_eta(g, n);
    const auto general = residue_general(v, eta, origin(n), dec);
    const auto simple = residue_simple(v, eta, origin(n), HypothesisMode::kStrict);
    CHECK(std::abs(general.complex() - simple.complex()) <= 1e-13 * std::max(1.0, std::abs(simple.complex())));
  }
}

TEST_CASE("general residue correction term, n = 1") {
  const int n = 1;
  const BodyExpr z = BodyExpr::var(1);
  const Complex a = 3.0;
  const auto g1 = SuperFunction::body(n, n, BodyExpr(2.0) * z);
  const SuperVectorField v(n, n, {sf_mul(SuperFunction::xi(n, n, 1), g1).scaled(BodyExpr(a))}, {g1});
  // only eta00_(empty; 1) = 5
  const auto eta = SuperForm::monomial(eta_00_monomial(n),
                                       SuperFunction::monomial(n, n, {}, MultiIndex::full(n), BodyExpr(5.0)));
  const Decomposition dec = {{{MultiIndex::full(n), a, 0.0, 0}}};
  const auto r = residue_general(v, eta, origin(n), dec);
  const Complex oracle = kTwoPiOverI * (-a * 5.0) / 2.0;
  CHECK(std::abs(r.complex() - oracle) < 1e-12);
}

TEST_CASE("decomposition validation") {
  const int n = 2;
  Gen g(76);
  const auto gs = random_g(g, n);
  const auto x1 = SuperFunction::xi(n, n, 1), x2 = SuperFunction::xi(n, n, 2);
  const SuperVectorField v(n, n, {sf_mul(x1, gs[0]), sf_mul(x2, gs[1])}, gs);
  const Decomposition good = {{{MultiIndex::from_labels({1}, n), 1.0, 0.0, 0}},
                              {{MultiIndex::from_labels({2}, n), 1.0, 0.0, 0}}};
  CHECK_NOTHROW(validate_decomposition(v, good));
  Decomposition wrong = good;
  wrong[0][0].a = 2.0;
  CHECK(invariant_of([&] { validate_decomposition(v, wrong); }) == "decomposition-reconstruction");
  Decomposition even = good;
  even[0][0].lambda = MultiIndex::from_labels({1, 2}, n);
  CHECK(invariant_of([&] { validate_decomposition(v, even); }) == "decomposition-odd-lambda");
  Decomposition self = good;
  self[0][0].b = 1.0;
  self[0][0].i_lambda = 1;
  CHECK(invariant_of([&] { validate_decomposition(v, self); }) == "decomposition-index");
  CHECK(invariant_of([&] { validate_decomposition(v, Decomposition{good[0]}); }) == "decomposition-shape");
}

TEST_CASE("hypothesis machinery") {
  const auto s = fixture("parity-violation.json");
  CHECK(invariant_of([&] { (void)residue_simple(s.field, s.form, s.points[0], HypothesisMode::kStrict); }) ==
        "parity-hypothesis");
  const auto r = residue_simple(s.field, s.form, s.points[0], HypothesisMode::kFZero);
  CHECK(r.value.is_one());
  const auto report = check_parity_hypothesis(s.form);
  CHECK_FALSE(report.satisfied);
  CHECK(report.detail.find("xi variables") != std::string::npos);

  // Counting xibar as well flips the verdict on the projective line fixture.
  const auto p11 = fixture("p1-1.json");
  CHECK(check_parity_hypothesis(p11.form).satisfied);
  CHECK_FALSE(check_parity_hypothesis(p11.form, true).satisfied);

  // f_zero mode requires f = 0.
  CHECK(invariant_of([&] { (void)residue_simple(p11.field, p11.form, p11.points[0], HypothesisMode::kFZero); }) ==
        "f-zero");
}

TEST_CASE("singular point and mode preconditions") {
  const auto s = fixture("degenerate.json");
  CHECK(invariant_of([&] { (void)residue_simple(s.field, s.form, s.points[0], HypothesisMode::kFZero); }) ==
        "nondegenerate-singularity");
  const auto p11 = fixture("p1-1.json");
  const SingularPoint off{{Complex(1.0, 0.0)}, 0};
  CHECK(invariant_of([&] { (void)residue_simple(p11.field, p11.form, off, HypothesisMode::kStrict); }) ==
        "singular-point");
  const SingularPoint short_point{{}, 0};
  CHECK(invariant_of([&] { (void)residue_simple(p11.field, p11.form, short_point, HypothesisMode::kStrict); }) ==
        "point-dimension");
  CHECK(invariant_of([&] { (void)residue_simple(p11.field, p11.form, p11.points[0], HypothesisMode::kGeneral); }) ==
        "mode");
  CHECK(parse_mode("f_zero") == HypothesisMode::kFZero);
  CHECK_THROWS_AS(parse_mode("loose"), ValidationError);
}

TEST_CASE("closure diagnostics") {
  const auto none = fixture("no-singularity.json");
  CHECK(is_closed(none.field, none.form) == std::optional<bool>(true));
  const auto p11 = fixture("p1-1.json");
  CHECK(is_closed(p11.field, p11.form) == std::optional<bool>(false));
  const auto p22 = fixture("p2-2.json");
  CHECK_FALSE(is_closed(p22.field, p22.form).has_value());
}

TEST_CASE("localization scales with eta") {
  const auto s = fixture("p1-1.json");
  auto in = s.localization_input();
  const auto base = check_localization(in);
  CHECK(base.pass);
  const Complex c(2.0, -1.0);
  const SuperForm scaled = s.form.scaled(BodyExpr(c));
  in.eta = &scaled;
  const auto rep = check_localization(in);
  CHECK(rep.pass);
  CHECK(std::abs(rep.sum - c * base.sum) < 1e-12);
  CHECK(std::abs(rep.integral.value - c * base.integral.value) < 1e-8);
}

TEST_CASE("Duistermaat-Heckman composition") {
  const int n = 1;
  const BodyExpr z = BodyExpr::var(1);
  const SuperVectorField v(n, n, {SuperFunction(n, n)}, {SuperFunction::body(n, n, z)});
  const auto caps = DegreeCaps::for_chart(n, n);
  // omega = 0, g = 0: exp is the unit 0-form with no residue components.
  const auto zero = dh_residues(v, SuperForm(n, n), SuperFunction(n, n), 0.5, origin(n), caps, HypothesisMode::kFZero);
  CHECK(zero.value.is_zero());

  // omega = (dbar + i_V) w for w = zbar dz + zbar dxi, g = -i_V w.
  const auto gbar = SuperFunction::body(n, n, z.conj());
  const auto w = SuperForm::one_form(n, n, {T::kDz, 1}, gbar) + SuperForm::one_form(n, n, {T::kDxi, 1}, gbar);
  const auto omega = dbar(w) + contract(v, w);
  const SuperFunction h = contract(v, w).component(FormMonomial::unit(n));
  for (double s : {0.0, 0.5}) {
    const auto r = dh_residues(v, omega, -h, s, origin(n), caps, HypothesisMode::kFZero);
    const auto direct = form_exp_truncated(omega + SuperForm::function(h.scaled(BodyExpr(s))), caps);
    CHECK(r.value == residue_simple(v, direct, origin(n), HypothesisMode::kFZero).value);
  }
  CHECK(invariant_of([&] {
          (void)dh_residues(v, w, SuperFunction(n, n), 0.0, origin(n), caps, HypothesisMode::kFZero);
        }) == "dh-closed");
}

}  // TEST_SUITE
