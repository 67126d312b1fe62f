#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ttsec/parser.hpp"
#include "ttsec/pretty.hpp"
#include "ttsec/term.hpp"

using namespace ttsec;

namespace {
const LabelAlgebra& tp = two_point_algebra();
const LabelAlgebra& comp = compartment_algebra();

TermPtr reparse(const TermPtr& t) { return parse_term(pretty(t), tp); }
}  // namespace

TEST_CASE("basic forms parse") {
  CHECK(alpha_eq(parse_term("pure 3", tp), mk_pure(mk_int(3))));
  CHECK(alpha_eq(parse_term("if true then 1 else 2", tp),
                 mk_if(mk_bool(true), mk_int(1), mk_int(2))));
  CHECK(alpha_eq(parse_term("fun (x:Int) => x", tp),
                 mk_lambda("x", mk_int_t(), mk_var("x"))));
  CHECK(alpha_eq(parse_term("forall x:Int. Int", tp),
                 mk_forall("x", mk_int_t(), mk_int_t())));
  CHECK(alpha_eq(parse_term("Int -> Bool", tp),
                 mk_forall("_", mk_int_t(), mk_bool_t())));
  CHECK(alpha_eq(parse_term("DIO H Int", tp),
                 mk_dio_t(mk_label_lit(TwoPoint::High), mk_int_t())));
  CHECK(alpha_eq(parse_term("DIO 42", tp), mk_dio_val(mk_int(42))));
  CHECK(alpha_eq(parse_term("Labeled 5", tp), mk_labeled_val(mk_int(5))));
  CHECK(alpha_eq(parse_term("Ref H 0", tp),
                 mk_ref_val(mk_label_lit(TwoPoint::High), 0)));
  CHECK(alpha_eq(parse_term("Ref H \xe2\x80\xa2", tp),
                 mk_ref_val(mk_label_lit(TwoPoint::High), std::nullopt)));
  CHECK(alpha_eq(parse_term("Ref H Int", tp),
                 mk_ref_t(mk_label_lit(TwoPoint::High), mk_int_t())));
  CHECK(alpha_eq(parse_term("newRef@H (Labeled 5)", tp),
                 mk_new_ref(mk_label_lit(TwoPoint::High),
                            mk_labeled_val(mk_int(5)))));
  CHECK(alpha_eq(parse_term("\xe2\x80\xa2", tp), mk_hole()));
  CHECK(alpha_eq(parse_term("_hole_", tp), mk_hole()));
  CHECK(alpha_eq(parse_term("plug\xe2\x80\xa2 x", tp), mk_plug_hole(mk_var("x"))));
  CHECK(alpha_eq(parse_term("plugHole x", tp), mk_plug_hole(mk_var("x"))));
  CHECK(alpha_eq(parse_term("a >>= b >>= c", tp),
                 mk_bind(mk_bind(mk_var("a"), mk_var("b")), mk_var("c"))));
  CHECK(alpha_eq(parse_term("(x : Int)", tp),
                 mk_ascribe(mk_var("x"), mk_int_t())));
}

TEST_CASE("binders freshen and resolve lexically") {
  auto t = parse_term("fun (x:Int) => fun (x:Int) => x", tp);
  REQUIRE(t->tag == Tag::Lambda);
  auto inner = t->kids[1];
  REQUIRE(inner->tag == Tag::Lambda);
  CHECK(t->text != inner->text);  // freshened apart
  CHECK(inner->kids[1]->text == inner->text);
}

TEST_CASE("labels parse per lattice") {
  CHECK(parse_label("L", tp) == Label{TwoPoint::Low});
  CHECK(parse_label("H", tp) == Label{TwoPoint::High});
  CHECK(parse_label("U(bot)", comp) == Label{Compartment::user(Id::bot())});
  CHECK(parse_label("U(3)", comp) == Label{Compartment::user(Id::nat(3))});
  CHECK(parse_label("A(1,2)", comp) ==
        Label{Compartment::author(Id::nat(1), Id::nat(2))});
  CHECK(parse_label("PC(top,2)", comp) ==
        Label{Compartment::pc(Id::top(), Id::nat(2))});
  CHECK(parse_label("PC(TOP,2)", comp) ==
        Label{Compartment::pc(Id::top(), Id::nat(2))});
  CHECK_THROWS_AS(parse_label("U(1)", tp), ParseError);
  CHECK_THROWS_AS(parse_label("L", comp), ParseError);
}

TEST_CASE("syntax errors carry positions") {
  try {
    parse_term("pure (3", tp, "f.ttsec");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.file == "f.ttsec");
    CHECK(e.line == 1);
    CHECK(std::string(e.what()).find("syntax") != std::string::npos);
  }
}

TEST_CASE("file directives") {
  auto f = parse_file("#lattice compartment\npure 1");
  CHECK(f.algebra == &comp);
  auto g = parse_file("#store H = [5, 7]; L = [1]\npure 1");
  CHECK(g.algebra == &tp);
  REQUIRE(g.store.size() == 2);
  CHECK(g.store[0].label == Label{TwoPoint::High});
  REQUIRE(g.store[0].cells.size() == 2);
  CHECK(alpha_eq(g.store[0].cells[1], mk_int(7)));
  auto h = parse_file("#store H = \xe2\x80\xa2\npure 1");
  CHECK(h.store[0].erased);
  CHECK_THROWS_AS(parse_file("#lattice two_point\n#lattice two_point\npure 1"),
                  ParseError);
}

TEST_CASE("the labeled-string concatenation program parses to the expected shape") {
  const char* src =
      "fun (l:Label) (l':Label) (x:Labeled l Str) (y:Labeled l' Str) => "
      "unlabel x >>= fun (ux:Str) => "
      "unlabel y >>= fun (uy:Str) => pure (concat ux uy)";
  auto t = parse_term(src, tp);
  // fun l l' x y => bind (unlabel x) (fun ux => bind (unlabel y) (fun uy => ...))
  REQUIRE(t->tag == Tag::Lambda);
  auto l = t;
  auto lp = l->kids[1];
  REQUIRE(lp->tag == Tag::Lambda);
  auto x = lp->kids[1];
  REQUIRE(x->tag == Tag::Lambda);
  CHECK(alpha_eq(x->kids[0],
                 mk_labeled_t(mk_var(l->text), mk_str_t())));
  auto y = x->kids[1];
  REQUIRE(y->tag == Tag::Lambda);
  auto body = y->kids[1];
  REQUIRE(body->tag == Tag::Bind);
  CHECK(body->kids[0]->tag == Tag::Unlabel);
  auto k1 = body->kids[1];
  REQUIRE(k1->tag == Tag::Lambda);
  auto body2 = k1->kids[1];
  REQUIRE(body2->tag == Tag::Bind);
  auto k2 = body2->kids[1];
  REQUIRE(k2->tag == Tag::Lambda);
  auto p = k2->kids[1];
  REQUIRE(p->tag == Tag::Pure);
  CHECK(alpha_eq(p->kids[0],
                 mk_app(mk_app(mk_prim(Prim::Concat), mk_var(k1->text)),
                        mk_var(k2->text))));
  // round trip
  CHECK(alpha_eq(parse_term(pretty(t), tp), t));
}

TEST_CASE("pretty golden forms") {
  CHECK(pretty(mk_pure(mk_int(3))) == "pure 3");
  CHECK(pretty(mk_hole()) == "\xe2\x80\xa2");
  CHECK(pretty(mk_dio_t(mk_label_lit(TwoPoint::High), mk_int_t())) ==
        "DIO H Int");
  CHECK(pretty(mk_dio_val(mk_int(42))) == "DIO 42");
  CHECK(pretty(mk_lambda("x", mk_int_t(), mk_var("x"))) == "fun (x:Int) => x");
  CHECK(pretty(mk_forall("x", mk_int_t(), mk_var("x"))) == "forall x:Int. x");
  CHECK(pretty(mk_forall("x", mk_int_t(), mk_bool_t())) == "Int -> Bool");
  CHECK(pretty(mk_bind(mk_pure(mk_int(1)),
                       mk_lambda("x", mk_int_t(), mk_pure(mk_var("x"))))) ==
        "pure 1 >>= fun (x:Int) => pure x");
  CHECK(pretty(mk_new_ref(mk_label_lit(TwoPoint::High),
                          mk_labeled_val(mk_int(5)))) ==
        "newRef@H (Labeled 5)");
  CHECK(pretty(mk_plug_hole(mk_hole())) ==
        "plug\xe2\x80\xa2 \xe2\x80\xa2");
  // shadowed binder hints get primed
  auto sh = mk_lambda("x", mk_int_t(),
                      mk_lambda("x'", mk_int_t(),
                                mk_app(mk_var("x"), mk_var("x'"))));
  CHECK(pretty(sh) == "fun (x:Int) (x':Int) => x x'");
}

// ---------------------------------------------------------------------------
// Random syntactic terms for the round-trip property. These need not be
// well-typed; they only exercise the grammar. Type positions avoid bare
// integer literals so that Ref's value/type forms stay distinguishable.

namespace {

class SyntaxGen {
 public:
  explicit SyntaxGen(std::uint64_t seed) : rng_(seed) {}

  TermPtr term(int depth) { return gen_term(depth); }

 private:
  std::mt19937_64 rng_;
  std::vector<std::string> scope_;

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  TermPtr leaf() {
    switch (pick(scope_.empty() ? 8 : 9)) {
      case 0: return mk_int(pick(200) - 100);
      case 1: return mk_bool(pick(2) == 0);
      case 2: return mk_unit();
      case 3: return mk_str(pick(2) == 0 ? "a b" : "x\"\\n");
      case 4: return mk_label_lit(pick(2) == 0 ? TwoPoint::Low : TwoPoint::High);
      case 5: return mk_prim(static_cast<Prim>(pick(3)));
      case 6: return mk_hole();
      case 7: return mk_var("free" + std::to_string(pick(3)));
      default: return mk_var(scope_[pick(static_cast<int>(scope_.size()))]);
    }
  }

  TermPtr gen_type(int depth) {
    if (depth <= 0) {
      switch (pick(6)) {
        case 0: return mk_int_t();
        case 1: return mk_bool_t();
        case 2: return mk_unit_t();
        case 3: return mk_str_t();
        case 4: return mk_label_t();
        default: return mk_type();
      }
    }
    switch (pick(5)) {
      case 0: return mk_dio_t(gen_label(depth - 1), gen_type(depth - 1));
      case 1: return mk_labeled_t(gen_label(depth - 1), gen_type(depth - 1));
      case 2: return mk_ref_t(gen_label(depth - 1), gen_type(depth - 1));
      case 3: {
        auto x = fresh_name("t");
        scope_.push_back(x);
        auto body = gen_type(depth - 1);
        scope_.pop_back();
        return mk_forall(x, gen_type(depth - 1), body);
      }
      default: return gen_type(0);
    }
  }

  TermPtr gen_label(int depth) {
    switch (pick(3)) {
      case 0: return mk_label_lit(pick(2) == 0 ? TwoPoint::Low : TwoPoint::High);
      case 1:
        if (depth > 0)
          return mk_app(mk_app(mk_prim(Prim::Join), gen_label(0)), gen_label(0));
        [[fallthrough]];
      default:
        return scope_.empty() ? mk_label_lit(TwoPoint::High)
                              : mk_var(scope_[pick(static_cast<int>(scope_.size()))]);
    }
  }

  TermPtr gen_term(int depth) {
    if (depth <= 0) return leaf();
    switch (pick(16)) {
      case 0: {
        auto x = fresh_name(pick(2) == 0 ? "x" : "y");
        scope_.push_back(x);
        auto body = gen_term(depth - 1);
        scope_.pop_back();
        return mk_lambda(x, gen_type(depth - 1), body);
      }
      case 1: {
        auto x = fresh_name("v");
        scope_.push_back(x);
        auto body = gen_term(depth - 1);
        scope_.pop_back();
        return mk_forall(x, gen_type(depth - 1), body);
      }
      case 2: return mk_app(gen_term(depth - 1), gen_term(depth - 1));
      case 3: return mk_if(gen_term(depth - 1), gen_term(depth - 1), gen_term(depth - 1));
      case 4: return mk_pure(gen_term(depth - 1));
      case 5: return mk_dio_val(gen_term(depth - 1));
      case 6: return mk_labeled_val(gen_term(depth - 1));
      case 7:
        return mk_ref_val(gen_label(depth - 1),
                          pick(3) == 0 ? std::nullopt
                                       : std::optional<std::uint64_t>(pick(4)));
      case 8: return mk_bind(gen_term(depth - 1), gen_term(depth - 1));
      case 9: return mk_label_op(gen_term(depth - 1));
      case 10: return mk_unlabel(gen_term(depth - 1));
      case 11: return mk_plug(gen_term(depth - 1));
      case 12: return mk_new_ref(gen_label(depth - 1), gen_term(depth - 1));
      case 13: return mk_read_ref(gen_term(depth - 1));
      case 14: return mk_write_ref(gen_term(depth - 1), gen_term(depth - 1));
      case 15: return mk_plug_hole(gen_term(depth - 1));
    }
    return leaf();
  }
};

}  // namespace

TEST_CASE("parse after pretty is the identity on random terms") {
  SyntaxGen gen(20240811);
  for (int i = 0; i < 2000; ++i) {
    auto t = gen.term(1 + i % 5);
    auto printed = pretty(t);
    CAPTURE(printed);
    TermPtr back;
    REQUIRE_NOTHROW(back = reparse(t));
    CHECK(alpha_eq(back, t));
  }
}

TEST_CASE("pretty output is stable") {
  SyntaxGen gen(7);
  for (int i = 0; i < 200; ++i) {
    auto t = gen.term(4);
    CHECK(pretty(t) == pretty(t));
    auto back = reparse(t);
    CHECK(pretty(back) == pretty(t));  // printing normalizes to a fixed point
  }
}
