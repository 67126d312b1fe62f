#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ttsec/step.hpp"
#include "ttsec/term.hpp"

using namespace ttsec;

namespace {
const LabelAlgebra& alg = two_point_algebra();
}

TEST_CASE("substitution basics") {
  auto t = subst(mk_var("x"), mk_int(3), "x");
  CHECK(alpha_eq(t, mk_int(3)));

  // no capture: fun (y:Int) => x with y substituted for x must rename y
  auto lam = mk_lambda("y", mk_int_t(), mk_var("x"));
  auto r = subst(lam, mk_var("y"), "x");
  REQUIRE(r->tag == Tag::Lambda);
  CHECK(r->text != "y");
  CHECK(r->kids[1]->tag == Tag::Var);
  CHECK(r->kids[1]->text == "y");
  CHECK(alpha_eq(r, mk_lambda("q", mk_int_t(), mk_var("y"))));

  auto b = mk_bind(mk_var("x"), mk_lambda("z", mk_int_t(), mk_pure(mk_var("z"))));
  auto br = subst(b, mk_dio_val(mk_int(1)), "x");
  CHECK(alpha_eq(br, mk_bind(mk_dio_val(mk_int(1)),
                             mk_lambda("z", mk_int_t(), mk_pure(mk_var("z"))))));
}

TEST_CASE("substitution respects shadowing") {
  // fun (x:Int) => x: substituting for the outer x leaves the body alone
  auto lam = mk_lambda("x", mk_int_t(), mk_var("x"));
  auto r = subst(lam, mk_int(7), "x");
  CHECK(alpha_eq(r, lam));
}

TEST_CASE("alpha equivalence") {
  CHECK(alpha_eq(mk_lambda("x", mk_int_t(), mk_var("x")),
                 mk_lambda("y", mk_int_t(), mk_var("y"))));
  CHECK(alpha_eq(mk_hole(), mk_hole()));
  CHECK_FALSE(alpha_eq(mk_labeled_val(mk_int(1)), mk_labeled_val(mk_int(2))));
  CHECK_FALSE(alpha_eq(mk_lambda("x", mk_int_t(), mk_var("x")),
                       mk_lambda("y", mk_int_t(), mk_var("x"))));
  // free variables compare by name
  CHECK(alpha_eq(mk_var("a"), mk_var("a")));
  CHECK_FALSE(alpha_eq(mk_var("a"), mk_var("b")));
  // bound-vs-free confusion
  auto l1 = mk_lambda("x", mk_int_t(), mk_var("free"));
  auto l2 = mk_lambda("free", mk_int_t(), mk_var("free"));
  CHECK_FALSE(alpha_eq(l1, l2));
}

TEST_CASE("alpha_eq is preserved by substitution") {
  auto a = mk_lambda("u", mk_int_t(), mk_app(mk_var("u"), mk_var("x")));
  auto b = mk_lambda("w", mk_int_t(), mk_app(mk_var("w"), mk_var("x")));
  REQUIRE(alpha_eq(a, b));
  auto v = mk_lambda("k", mk_int_t(), mk_var("k"));
  CHECK(alpha_eq(subst(a, v, "x"), subst(b, v, "x")));
}

TEST_CASE("substituting a fresh variable and back is the identity") {
  auto t = mk_bind(mk_pure(mk_var("x")),
                   mk_lambda("y", mk_int_t(), mk_pure(mk_var("y"))));
  auto fresh = fresh_name("tmp");
  auto round = subst(subst(t, mk_var(fresh), "x"), mk_var("x"), fresh);
  CHECK(alpha_eq(round, t));
}

TEST_CASE("values are exactly the terms without a pure step") {
  CHECK(is_value(mk_dio_val(mk_int(3)), alg));
  CHECK(is_value(mk_labeled_val(mk_int(5)), alg));
  CHECK(is_value(mk_lambda("x", mk_int_t(), mk_var("x")), alg));
  CHECK(is_value(mk_int(1), alg));
  CHECK(is_value(mk_ref_val(mk_label_lit(TwoPoint::High), 0), alg));
  CHECK(is_value(mk_dio_t(mk_label_lit(TwoPoint::High), mk_int_t()), alg));

  CHECK_FALSE(is_value(mk_pure(mk_int(3)), alg));
  CHECK_FALSE(is_value(mk_if(mk_bool(true), mk_int(1), mk_int(2)), alg));
  CHECK_FALSE(is_value(mk_hole(), alg));
  CHECK_FALSE(is_value(mk_plug_hole(mk_int(1)), alg));
}

TEST_CASE("pure steps follow the reduction rules") {
  auto s1 = pure_step(mk_pure(mk_int(3)), alg);
  REQUIRE(s1.has_value());
  CHECK(s1->rule == "Pure2");
  CHECK(alpha_eq(s1->next, mk_dio_val(mk_int(3))));

  auto s2 = pure_step(mk_unlabel(mk_labeled_val(mk_bool(true))), alg);
  REQUIRE(s2.has_value());
  CHECK(s2->rule == "Unlabel2");
  CHECK(alpha_eq(s2->next, mk_pure(mk_bool(true))));

  auto s3 = pure_step(mk_plug_hole(mk_var("anything")), alg);
  REQUIRE(s3.has_value());
  CHECK(s3->rule == "PlugHole");
  CHECK(alpha_eq(s3->next, mk_pure(mk_labeled_val(mk_hole()))));

  auto s4 = pure_step(mk_hole(), alg);
  REQUIRE(s4.has_value());
  CHECK(s4->rule == "Hole");
  CHECK(alpha_eq(s4->next, mk_hole()));

  auto beta = pure_step(
      mk_app(mk_lambda("x", mk_int_t(), mk_var("x")), mk_int(9)), alg);
  REQUIRE(beta.has_value());
  CHECK(beta->rule == "Beta");
  CHECK(alpha_eq(beta->next, mk_int(9)));

  auto add = mk_app(mk_app(mk_prim(Prim::Add), mk_int(1)), mk_int(2));
  auto d = pure_step(add, alg);
  REQUIRE(d.has_value());
  CHECK(d->rule == "Delta");
  CHECK(alpha_eq(d->next, mk_int(3)));

  auto j = mk_app(mk_app(mk_prim(Prim::Join), mk_label_lit(TwoPoint::Low)),
                  mk_label_lit(TwoPoint::High));
  auto js = pure_step(j, alg);
  REQUIRE(js.has_value());
  CHECK(alpha_eq(js->next, mk_label_lit(TwoPoint::High)));

  // bind fires purely once the left side is a computation value
  auto b = pure_step(
      mk_bind(mk_dio_val(mk_int(1)), mk_lambda("x", mk_int_t(), mk_pure(mk_var("x")))),
      alg);
  REQUIRE(b.has_value());
  CHECK(b->rule == "Bind1");

  // ... but not before
  CHECK_FALSE(pure_step(mk_bind(mk_pure(mk_int(1)),
                                mk_lambda("x", mk_int_t(), mk_pure(mk_var("x")))),
                        alg)
                  .has_value());
}

TEST_CASE("pure enumeration finds at most one applicable rule") {
  std::vector<TermPtr> terms = {
      mk_pure(mk_int(3)),
      mk_pure(mk_app(mk_lambda("x", mk_int_t(), mk_var("x")), mk_int(1))),
      mk_if(mk_bool(false), mk_int(1), mk_int(2)),
      mk_app(mk_app(mk_prim(Prim::Add), mk_int(1)), mk_int(2)),
      mk_bind(mk_dio_val(mk_int(1)), mk_lambda("x", mk_int_t(), mk_pure(mk_var("x")))),
      mk_unlabel(mk_label_op(mk_int(2))),
      mk_hole(),
      mk_plug_hole(mk_pure(mk_int(1))),
      mk_forall("x", mk_if(mk_bool(true), mk_int_t(), mk_bool_t()), mk_int_t()),
  };
  for (const auto& t : terms) {
    auto all = enumerate_pure_steps(t, alg);
    CHECK(all.size() <= 1);
    auto s = pure_step(t, alg);
    REQUIRE(s.has_value() == !all.empty());
    if (s) CHECK(alpha_eq(s->next, all[0].next));
  }
}
