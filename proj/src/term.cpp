#include "ttsec/term.hpp"

#include <atomic>
#include <unordered_map>

namespace ttsec {

namespace {

TermPtr node(Tag tag, std::vector<TermPtr> kids = {}) {
  auto t = std::make_shared<Term>();
  t->tag = tag;
  t->kids = std::move(kids);
  return t;
}

}  // namespace

TermPtr mk_int(std::int64_t v) {
  auto t = std::make_shared<Term>();
  t->tag = Tag::IntLit;
  t->int_val = v;
  return t;
}

TermPtr mk_bool(bool v) {
  auto t = std::make_shared<Term>();
  t->tag = Tag::BoolLit;
  t->bool_val = v;
  return t;
}

TermPtr mk_unit() { return node(Tag::UnitLit); }

TermPtr mk_str(std::string s) {
  auto t = std::make_shared<Term>();
  t->tag = Tag::StrLit;
  t->text = std::move(s);
  return t;
}

TermPtr mk_label_lit(Label l) {
  auto t = std::make_shared<Term>();
  t->tag = Tag::LabelLit;
  t->label = std::move(l);
  return t;
}

TermPtr mk_prim(Prim p) {
  auto t = std::make_shared<Term>();
  t->tag = Tag::Prim;
  t->prim = p;
  return t;
}

TermPtr mk_var(std::string name) {
  auto t = std::make_shared<Term>();
  t->tag = Tag::Var;
  t->text = std::move(name);
  return t;
}

TermPtr mk_lambda(std::string x, TermPtr ann, TermPtr body) {
  auto t = node(Tag::Lambda, {std::move(ann), std::move(body)});
  const_cast<Term*>(t.get())->text = std::move(x);
  return t;
}

TermPtr mk_forall(std::string x, TermPtr ann, TermPtr body) {
  auto t = node(Tag::Forall, {std::move(ann), std::move(body)});
  const_cast<Term*>(t.get())->text = std::move(x);
  return t;
}

TermPtr mk_app(TermPtr fn, TermPtr arg) {
  return node(Tag::App, {std::move(fn), std::move(arg)});
}

TermPtr mk_if(TermPtr c, TermPtr t, TermPtr e) {
  return node(Tag::If, {std::move(c), std::move(t), std::move(e)});
}

TermPtr mk_type() { return node(Tag::TypeU); }
TermPtr mk_int_t() { return node(Tag::IntT); }
TermPtr mk_bool_t() { return node(Tag::BoolT); }
TermPtr mk_unit_t() { return node(Tag::UnitT); }
TermPtr mk_str_t() { return node(Tag::StrT); }
TermPtr mk_label_t() { return node(Tag::LabelT); }

TermPtr mk_dio_t(TermPtr label, TermPtr ty) {
  return node(Tag::DioT, {std::move(label), std::move(ty)});
}

TermPtr mk_labeled_t(TermPtr label, TermPtr ty) {
  return node(Tag::LabeledT, {std::move(label), std::move(ty)});
}

TermPtr mk_ref_t(TermPtr label, TermPtr ty) {
  return node(Tag::RefT, {std::move(label), std::move(ty)});
}

TermPtr mk_pure(TermPtr t) { return node(Tag::Pure, {std::move(t)}); }
TermPtr mk_dio_val(TermPtr t) { return node(Tag::DioVal, {std::move(t)}); }
TermPtr mk_labeled_val(TermPtr t) { return node(Tag::LabeledVal, {std::move(t)}); }

TermPtr mk_ref_val(TermPtr label, std::optional<std::uint64_t> index) {
  auto t = node(Tag::RefVal, {std::move(label)});
  const_cast<Term*>(t.get())->ref_index = index;
  return t;
}

TermPtr mk_bind(TermPtr t1, TermPtr t2) {
  return node(Tag::Bind, {std::move(t1), std::move(t2)});
}

TermPtr mk_label_op(TermPtr t) { return node(Tag::LabelOp, {std::move(t)}); }
TermPtr mk_unlabel(TermPtr t) { return node(Tag::Unlabel, {std::move(t)}); }
TermPtr mk_plug(TermPtr t) { return node(Tag::Plug, {std::move(t)}); }

TermPtr mk_new_ref(TermPtr label, TermPtr t) {
  return node(Tag::NewRef, {std::move(label), std::move(t)});
}

TermPtr mk_read_ref(TermPtr t) { return node(Tag::ReadRef, {std::move(t)}); }

TermPtr mk_write_ref(TermPtr t1, TermPtr t2) {
  return node(Tag::WriteRef, {std::move(t1), std::move(t2)});
}

TermPtr mk_hole() { return node(Tag::Hole); }
TermPtr mk_plug_hole(TermPtr t) { return node(Tag::PlugHole, {std::move(t)}); }

TermPtr mk_ascribe(TermPtr t, TermPtr ty) {
  return node(Tag::Ascribe, {std::move(t), std::move(ty)});
}

TermPtr with_loc(TermPtr t, SrcLoc loc) {
  auto copy = std::make_shared<Term>(*t);
  copy->loc = loc;
  return copy;
}

std::string fresh_name(const std::string& hint) {
  static std::atomic<std::uint64_t> counter{0};
  auto base = name_hint(hint);
  return base + "#" + std::to_string(counter.fetch_add(1));
}

std::string name_hint(const std::string& name) {
  auto pos = name.find('#');
  return pos == std::string::npos ? name : name.substr(0, pos);
}

bool is_binder(Tag tag) { return tag == Tag::Lambda || tag == Tag::Forall; }

namespace {

bool alpha_eq_rec(const TermPtr& a, const TermPtr& b,
                  std::vector<std::pair<std::string, std::string>>& env) {
  if (a == b && env.empty()) return true;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Tag::IntLit: return a->int_val == b->int_val;
    case Tag::BoolLit: return a->bool_val == b->bool_val;
    case Tag::StrLit: return a->text == b->text;
    case Tag::LabelLit: return a->label == b->label;
    case Tag::Prim: return a->prim == b->prim;
    case Tag::Var: {
      // innermost binding wins
      for (auto it = env.rbegin(); it != env.rend(); ++it) {
        if (it->first == a->text || it->second == b->text)
          return it->first == a->text && it->second == b->text;
      }
      return a->text == b->text;
    }
    case Tag::RefVal:
      if (a->ref_index != b->ref_index) return false;
      break;
    default: break;
  }
  if (a->kids.size() != b->kids.size()) return false;
  if (is_binder(a->tag)) {
    if (!alpha_eq_rec(a->kids[0], b->kids[0], env)) return false;
    env.emplace_back(a->text, b->text);
    bool ok = alpha_eq_rec(a->kids[1], b->kids[1], env);
    env.pop_back();
    return ok;
  }
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!alpha_eq_rec(a->kids[i], b->kids[i], env)) return false;
  return true;
}

void free_vars_rec(const TermPtr& t, std::vector<std::string>& bound,
                   std::set<std::string>& out) {
  if (t->tag == Tag::Var) {
    for (const auto& b : bound)
      if (b == t->text) return;
    out.insert(t->text);
    return;
  }
  if (is_binder(t->tag)) {
    free_vars_rec(t->kids[0], bound, out);
    bound.push_back(t->text);
    free_vars_rec(t->kids[1], bound, out);
    bound.pop_back();
    return;
  }
  for (const auto& k : t->kids) free_vars_rec(k, bound, out);
}

}  // namespace

bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  std::vector<std::pair<std::string, std::string>> env;
  return alpha_eq_rec(a, b, env);
}

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  free_vars_rec(t, bound, out);
  return out;
}

TermPtr subst(const TermPtr& t, const TermPtr& v, const std::string& x) {
  switch (t->tag) {
    case Tag::Var: return t->text == x ? v : t;
    case Tag::IntLit:
    case Tag::BoolLit:
    case Tag::UnitLit:
    case Tag::StrLit:
    case Tag::LabelLit:
    case Tag::Prim:
    case Tag::TypeU:
    case Tag::IntT:
    case Tag::BoolT:
    case Tag::UnitT:
    case Tag::StrT:
    case Tag::LabelT:
    case Tag::Hole:
      return t;
    default: break;
  }
  if (is_binder(t->tag)) {
    auto ann = subst(t->kids[0], v, x);
    if (t->text == x) {
      // x is shadowed; only the annotation sees the substitution
      if (ann == t->kids[0]) return t;
      auto copy = std::make_shared<Term>(*t);
      copy->kids[0] = ann;
      return copy;
    }
    auto body = t->kids[1];
    auto name = t->text;
    if (free_vars(v).contains(name) && free_vars(body).contains(x)) {
      auto renamed = fresh_name(name);
      body = subst(body, mk_var(renamed), name);
      name = renamed;
    }
    body = subst(body, v, x);
    if (ann == t->kids[0] && body == t->kids[1] && name == t->text) return t;
    auto copy = std::make_shared<Term>(*t);
    copy->text = name;
    copy->kids[0] = ann;
    copy->kids[1] = body;
    return copy;
  }
  bool changed = false;
  std::vector<TermPtr> kids;
  kids.reserve(t->kids.size());
  for (const auto& k : t->kids) {
    auto nk = subst(k, v, x);
    changed |= nk != k;
    kids.push_back(std::move(nk));
  }
  if (!changed) return t;
  auto copy = std::make_shared<Term>(*t);
  copy->kids = std::move(kids);
  return copy;
}

std::string_view head_name(Tag tag) {
  switch (tag) {
    case Tag::IntLit: return "int";
    case Tag::BoolLit: return "bool";
    case Tag::UnitLit: return "unit";
    case Tag::StrLit: return "str";
    case Tag::LabelLit: return "label-lit";
    case Tag::Prim: return "prim";
    case Tag::Var: return "var";
    case Tag::Lambda: return "fun";
    case Tag::Forall: return "forall";
    case Tag::App: return "app";
    case Tag::If: return "if";
    case Tag::TypeU: return "Type";
    case Tag::IntT: return "Int";
    case Tag::BoolT: return "Bool";
    case Tag::UnitT: return "Unit";
    case Tag::StrT: return "Str";
    case Tag::LabelT: return "Label";
    case Tag::DioT: return "DIO-type";
    case Tag::LabeledT: return "Labeled-type";
    case Tag::RefT: return "Ref-type";
    case Tag::Pure: return "pure";
    case Tag::DioVal: return "DIO";
    case Tag::LabeledVal: return "Labeled";
    case Tag::RefVal: return "Ref";
    case Tag::Bind: return "bind";
    case Tag::LabelOp: return "label";
    case Tag::Unlabel: return "unlabel";
    case Tag::Plug: return "plug";
    case Tag::NewRef: return "newRef";
    case Tag::ReadRef: return "readRef";
    case Tag::WriteRef: return "writeRef";
    case Tag::Hole: return "hole";
    case Tag::PlugHole: return "plug-hole";
    case Tag::Ascribe: return "ascribe";
  }
  return "?";
}

std::string_view prim_name(Prim p) {
  switch (p) {
    case Prim::Add: return "add";
    case Prim::Concat: return "concat";
    case Prim::Join: return "join";
  }
  return "?";
}

}  // namespace ttsec
