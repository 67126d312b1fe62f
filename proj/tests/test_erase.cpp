#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ttsec/erase.hpp"
#include "ttsec/parser.hpp"
#include "ttsec/pretty.hpp"

using namespace ttsec;

namespace {
const LabelAlgebra& tp = two_point_algebra();
const Label Lo{TwoPoint::Low};
const Label Hi{TwoPoint::High};

TermPtr parse(const std::string& s) { return parse_term(s, tp); }

TermPtr erased(const std::string& term, const std::string& type,
               const Label& attacker) {
  auto tt = elaborate_against(Context(tp), parse(term), parse(type));
  return erase_term(tp, attacker, tt);
}

Configuration cfg(const std::string& term, const std::string& type,
                  Store store = {}) {
  return make_config(tp, std::move(store), parse(term), parse(type));
}
}  // namespace

TEST_CASE("labeled values blank their payload when secret") {
  CHECK(alpha_eq(erased("Labeled 5", "Labeled H Int", Lo),
                 parse("Labeled \xe2\x80\xa2")));
  CHECK(alpha_eq(erased("Labeled 5", "Labeled L Int", Lo),
                 parse("Labeled 5")));
  CHECK(alpha_eq(erased("Labeled 5", "Labeled H Int", Hi),
                 parse("Labeled 5")));
  CHECK(alpha_eq(erased("label 5", "Labeled H Int", Lo),
                 parse("label \xe2\x80\xa2")));
}

TEST_CASE("secret computations vanish") {
  for (const char* src : {"pure 3", "DIO 3", "pure 1 >>= fun (x:Int) => pure x",
                          "if true then pure 1 else pure 2",
                          "(fun (x:Int) => pure x) 3"}) {
    CHECK(alpha_eq(erased(src, "DIO H Int", Lo), mk_hole()));
  }
  CHECK(alpha_eq(erased("newRef@H (Labeled 1)", "DIO H (Ref H Int)", Lo),
                 mk_hole()));
  // public ones erase homomorphically
  CHECK(alpha_eq(erased("pure 3", "DIO L Int", Lo), parse("pure 3")));
}

TEST_CASE("plug becomes plug-hole when only the inner label is secret") {
  CHECK(alpha_eq(erased("plug (pure 1)", "DIO L (Labeled H Int)", Lo),
                 parse("plug\xe2\x80\xa2 \xe2\x80\xa2")));
  CHECK(alpha_eq(erased("plug (pure 1)", "DIO L (Labeled L Int)", Lo),
                 parse("plug (pure 1)")));
  CHECK(alpha_eq(erased("plug (pure 1)", "DIO H (Labeled H Int)", Lo),
                 mk_hole()));
  CHECK(alpha_eq(erased("plug\xe2\x80\xa2 (pure 1)",
                        "DIO L (Labeled H Int)", Lo),
                 parse("plug\xe2\x80\xa2 \xe2\x80\xa2")));
}

TEST_CASE("references erase their index when the cell label is secret") {
  Store st;
  st.segment(Hi).cells.push_back({mk_int(9), mk_int_t()});
  auto c = make_config(tp, st, parse("pure (Ref H 0)"),
                       parse("DIO L (Ref H Int)"));
  auto e = erase_config_raw(Lo, c);
  CHECK(alpha_eq(e.term, parse("pure (Ref H \xe2\x80\xa2)")));
  CHECK(e.store.find(Hi)->erased);
  // a read of such a reference keeps its shape
  auto r = make_config(tp, st, parse("readRef (Ref H 0)"),
                       parse("DIO L (Labeled H Int)"));
  auto er = erase_config_raw(Lo, r);
  CHECK(alpha_eq(er.term, parse("readRef (Ref H \xe2\x80\xa2)")));
}

TEST_CASE("store erasure is pointwise") {
  Store st;
  st.segment(Hi).cells.push_back({mk_int(5), mk_int_t()});
  st.segment(Lo).cells.push_back({mk_int(1), mk_int_t()});
  auto es = erase_store(tp, Lo, st);
  CHECK(es.find(Hi)->erased);
  REQUIRE(es.find(Lo) != nullptr);
  CHECK_FALSE(es.find(Lo)->erased);
  CHECK(alpha_eq(es.find(Lo)->cells[0].value, mk_int(1)));

  // at level H everything is visible
  auto eh = erase_store(tp, Hi, st);
  CHECK_FALSE(eh.find(Hi)->erased);
  CHECK(alpha_eq(eh.find(Hi)->cells[0].value, mk_int(5)));

  Store empty;
  CHECK(erase_store(tp, Lo, empty).segments().empty());
}

TEST_CASE("configuration erasure collapses secret terms") {
  Store st;
  st.segment(Hi).cells.push_back({mk_int(5), mk_int_t()});
  auto c = make_config(tp, st, parse("pure 3"), parse("DIO H Int"));
  auto e = erase_config_raw(Lo, c);
  CHECK(alpha_eq(e.term, mk_hole()));
  CHECK(e.store.find(Hi)->erased);

  auto pub = make_config(tp, st, parse("pure 3"), parse("DIO L Int"));
  auto ep = erase_config_raw(Lo, pub);
  CHECK(alpha_eq(ep.term, parse("pure 3")));
}

TEST_CASE("erasing twice equals erasing once") {
  Store st;
  st.segment(Hi).cells.push_back({mk_int(5), mk_int_t()});
  st.segment(Lo).cells.push_back({mk_labeled_val(mk_int(2)),
                                  parse("Labeled H Int")});
  std::vector<Configuration> cs;
  cs.push_back(make_config(tp, st, parse("pure 3"), parse("DIO L Int")));
  cs.push_back(make_config(tp, st, parse("pure 3"), parse("DIO H Int")));
  cs.push_back(make_config(tp, st, parse("plug (pure 1)"),
                           parse("DIO L (Labeled H Int)")));
  for (const auto& c : cs) {
    for (const auto& attacker : tp.carrier_sample()) {
      auto once = erase_config(attacker, c);
      auto twice = erase_config(attacker, once);
      CHECK(config_equal(once, twice));
    }
  }
}

TEST_CASE("erased configurations still type-check and step") {
  Store st;
  st.segment(Hi).cells.push_back({mk_int(9), mk_int_t()});
  auto c = make_config(tp, st, parse("readRef (Ref H 0)"),
                       parse("DIO L (Labeled H Int)"));
  auto ec = erase_config(Lo, c);
  long fuel = 100;
  auto s = monadic_step(ec, fuel);
  REQUIRE(s.has_value());
  CHECK(alpha_eq(s->next.raw(), parse("pure (Labeled \xe2\x80\xa2)")));
}

TEST_CASE("low equivalence ignores differences above the attacker") {
  Store s1, s2;
  s1.segment(Hi).cells.push_back({mk_int(1), mk_int_t()});
  s2.segment(Hi).cells.push_back({mk_int(2), mk_int_t()});
  auto c1 = make_config(tp, s1, parse("pure 42"), parse("DIO L Int"));
  auto c2 = make_config(tp, s2, parse("pure 42"), parse("DIO L Int"));
  CHECK(low_equiv(Lo, c1, c2));
  CHECK_FALSE(low_equiv(Hi, c1, c2));
  CHECK(low_equiv(Lo, c1, c1));

  Store p1, p2;
  p1.segment(Lo).cells.push_back({mk_int(1), mk_int_t()});
  p2.segment(Lo).cells.push_back({mk_int(2), mk_int_t()});
  auto d1 = make_config(tp, p1, parse("pure 42"), parse("DIO L Int"));
  auto d2 = make_config(tp, p2, parse("pure 42"), parse("DIO L Int"));
  CHECK_FALSE(low_equiv(Lo, d1, d2));
}

TEST_CASE("erasure commutes with substitution on a fixed example") {
  // t = pure x with a secret labeled hole for x
  auto ctx = Context(tp).bind("x", parse("Labeled H Int"));
  auto t = parse("pure x");
  auto ty = parse("DIO L (Labeled H Int)");
  auto tt = elaborate_against(ctx, t, ty);
  auto v = elaborate_against(Context(tp), parse("Labeled 7"),
                             parse("Labeled H Int"));
  auto lhs_term = subst(t, v->term, "x");
  auto lhs = erase_term(
      tp, Lo, elaborate_against(Context(tp), lhs_term, ty));
  auto rhs = subst(erase_term(tp, Lo, tt), erase_term(tp, Lo, v), "x");
  CHECK(alpha_eq(lhs, rhs));
}
