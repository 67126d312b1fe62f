#include "ttsec/pretty.hpp"

#include <set>
#include <vector>

namespace ttsec {

namespace {

// Precedence levels: higher binds tighter. A node prints bare when its own
// level is at least the level the position requires. Constructs whose text
// extends maximally to the right (fun / forall / if and anything ending in
// one) additionally need parentheses wherever an operator or another atom
// could follow.
constexpr int kExpr = 0;   // ascription
constexpr int kBind = 1;   // >>=
constexpr int kArrow = 2;  // ->, fun, forall, if
constexpr int kApp = 3;
constexpr int kAtom = 4;

struct Printed {
  std::string text;
  bool open = false;  // extends maximally right when printed bare
};

struct Printer {
  // unique name -> display name for binders in scope
  std::vector<std::pair<std::string, std::string>> scope;

  std::string display(const std::string& unique) const {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (it->first == unique) return it->second;
    return name_hint(unique);
  }

  // Display name for a binder: its hint, primed until it collides neither
  // with the display of any variable free in `body` (other than the binder
  // itself) nor with another binder display currently in scope.
  std::string binder_display(const std::string& unique, const TermPtr& body) {
    std::set<std::string> forbidden;
    for (const auto& v : free_vars(body))
      if (v != unique) forbidden.insert(display(v));
    std::string candidate = name_hint(unique);
    if (candidate.empty()) candidate = "x";
    while (forbidden.contains(candidate)) candidate += "'";
    return candidate;
  }

  std::string print(const TermPtr& t, int level, bool open_ok) {
    Printed p = render(t);
    int own = node_level(t);
    if (own < level || (p.open && !open_ok)) return "(" + p.text + ")";
    return p.text;
  }

  static int node_level(const TermPtr& t) {
    switch (t->tag) {
      case Tag::Ascribe: return kExpr;
      case Tag::Bind: return kBind;
      case Tag::Lambda:
      case Tag::Forall:
      case Tag::If: return kArrow;
      case Tag::App: return kApp;
      default: return kAtom;
    }
  }

  Printed render(const TermPtr& t) {
    switch (t->tag) {
      case Tag::IntLit: return {std::to_string(t->int_val)};
      case Tag::BoolLit: return {t->bool_val ? "true" : "false"};
      case Tag::UnitLit: return {"unit"};
      case Tag::StrLit: return {quote(t->text)};
      case Tag::LabelLit: return {to_string(t->label)};
      case Tag::Prim: return {std::string(prim_name(t->prim))};
      case Tag::Var: return {display(t->text)};
      case Tag::TypeU: return {"Type"};
      case Tag::IntT: return {"Int"};
      case Tag::BoolT: return {"Bool"};
      case Tag::UnitT: return {"Unit"};
      case Tag::StrT: return {"Str"};
      case Tag::LabelT: return {"Label"};
      case Tag::Hole: return {"\xe2\x80\xa2"};
      case Tag::Lambda: return lambda(t);
      case Tag::Forall: return forall(t);
      case Tag::App: {
        auto fn = print(t->kids[0], kApp, false);
        auto arg = print(t->kids[1], kAtom, false);
        return {fn + " " + arg};
      }
      case Tag::If: {
        auto c = print(t->kids[0], kExpr, true);
        auto a = print(t->kids[1], kExpr, true);
        auto b = print(t->kids[2], kExpr, true);
        return {"if " + c + " then " + a + " else " + b, true};
      }
      case Tag::DioT: return two_arg("DIO", t);
      case Tag::LabeledT: return two_arg("Labeled", t);
      case Tag::RefT: return two_arg("Ref", t);
      case Tag::Pure: return one_arg("pure", t);
      // a following atom would turn these into the two-argument type forms
      case Tag::DioVal: return {one_arg("DIO", t).text, true};
      case Tag::LabeledVal: return {one_arg("Labeled", t).text, true};
      case Tag::LabelOp: return one_arg("label", t);
      case Tag::Unlabel: return one_arg("unlabel", t);
      case Tag::Plug: return one_arg("plug", t);
      case Tag::ReadRef: return one_arg("readRef", t);
      case Tag::PlugHole: return one_arg("plug\xe2\x80\xa2", t);
      case Tag::RefVal: {
        auto l = print(t->kids[0], kAtom, false);
        auto idx = t->ref_index ? std::to_string(*t->ref_index)
                                : std::string("\xe2\x80\xa2");
        return {"Ref " + l + " " + idx};
      }
      case Tag::NewRef: {
        auto l = print(t->kids[0], kAtom, false);
        auto v = print(t->kids[1], kAtom, false);
        return {"newRef@" + l + " " + v};
      }
      case Tag::WriteRef: {
        auto r = print(t->kids[0], kAtom, false);
        auto v = print(t->kids[1], kAtom, false);
        return {"writeRef " + r + " " + v};
      }
      case Tag::Bind: {
        Printed lhs{print(t->kids[0], kBind, false)};
        Printed rhs = render_at(t->kids[1], kArrow, true);
        return {lhs.text + " >>= " + rhs.text, rhs.open};
      }
      case Tag::Ascribe: {
        auto lhs = print(t->kids[0], kBind, false);
        Printed rhs = render_at(t->kids[1], kBind, true);
        return {lhs + " : " + rhs.text, rhs.open};
      }
    }
    return {"?"};
  }

  // Like print, but reports whether the final text still extends right.
  Printed render_at(const TermPtr& t, int level, bool open_ok) {
    Printed p = render(t);
    int own = node_level(t);
    if (own < level || (p.open && !open_ok)) return {"(" + p.text + ")", false};
    return p;
  }

  Printed one_arg(const char* kw, const TermPtr& t) {
    return {std::string(kw) + " " + print(t->kids[0], kAtom, false)};
  }

  Printed two_arg(const char* kw, const TermPtr& t) {
    return {std::string(kw) + " " + print(t->kids[0], kAtom, false) + " " +
            print(t->kids[1], kAtom, false)};
  }

  Printed lambda(const TermPtr& t) {
    std::string out = "fun";
    TermPtr cur = t;
    std::size_t pushed = 0;
    while (cur->tag == Tag::Lambda) {
      auto ann = print(cur->kids[0], kArrow, true);
      auto name = binder_display(cur->text, cur->kids[1]);
      out += " (" + name + ":" + ann + ")";
      scope.emplace_back(cur->text, name);
      ++pushed;
      cur = cur->kids[1];
    }
    out += " => " + print(cur, kExpr, true);
    while (pushed--) scope.pop_back();
    return {out, true};
  }

  Printed forall(const TermPtr& t) {
    bool dependent = free_vars(t->kids[1]).contains(t->text);
    if (!dependent) {
      auto dom = print(t->kids[0], kApp, false);
      Printed cod = render_at(t->kids[1], kArrow, true);
      return {dom + " -> " + cod.text, cod.open};
    }
    auto ann = print(t->kids[0], kArrow, true);
    auto name = binder_display(t->text, t->kids[1]);
    scope.emplace_back(t->text, name);
    auto body = print(t->kids[1], kExpr, true);
    scope.pop_back();
    return {"forall " + name + ":" + ann + ". " + body, true};
  }

  static std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
      }
    }
    out += "\"";
    return out;
  }
};

}  // namespace

std::string pretty(const TermPtr& t) {
  Printer p;
  return p.print(t, kExpr, true);
}

}  // namespace ttsec
