#include "ttsec/typecheck.hpp"

#include "ttsec/pretty.hpp"

namespace ttsec {

std::string_view kind_name(TypeErrorKind k) {
  switch (k) {
    case TypeErrorKind::Mismatch: return "mismatch";
    case TypeErrorKind::UnboundVariable: return "unbound variable";
    case TypeErrorKind::FlowViolation: return "flow violation";
    case TypeErrorKind::NotAFunction: return "not a function";
    case TypeErrorKind::FuelExhausted: return "fuel exhausted";
    case TypeErrorKind::UnresolvedLabel: return "unresolved label";
  }
  return "?";
}

namespace {

std::string describe(TypeErrorKind kind, const std::string& msg,
                     const TermPtr& expected, const TermPtr& actual) {
  std::string out = std::string(kind_name(kind)) + ": " + msg;
  if (expected) out += "; expected " + pretty(expected);
  if (actual) out += ", got " + pretty(actual);
  return out;
}

}  // namespace

TypeError::TypeError(TypeErrorKind kind, std::string msg, TermPtr offending,
                     TermPtr expected, TermPtr actual)
    : std::runtime_error(describe(kind, msg, expected, actual)),
      kind(kind),
      offending(std::move(offending)),
      expected(std::move(expected)),
      actual(std::move(actual)) {
  if (this->offending) loc = this->offending->loc;
}

Context Context::bind(std::string name, TermPtr type) const {
  Context c = *this;
  c.bindings_.emplace_back(std::move(name), std::move(type));
  return c;
}

Context Context::assume(TermPtr from, TermPtr to) const {
  Context c = *this;
  c.rewrites_.push_back({std::move(from), std::move(to)});
  return c;
}

Context Context::with_ambient(TermPtr label) const {
  Context c = *this;
  c.ambient_ = std::move(label);
  return c;
}

Context Context::without_ambient() const {
  Context c = *this;
  c.ambient_ = nullptr;
  return c;
}

Context Context::with_store_typing(const StoreTyping* st) const {
  Context c = *this;
  c.store_ = st;
  return c;
}

TermPtr Context::lookup(const std::string& name) const {
  for (auto it = bindings_.rbegin(); it != bindings_.rend(); ++it)
    if (it->first == name) return it->second;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Normalization

namespace {

struct Fuel {
  long remaining;
  void spend(const TermPtr& at) {
    if (--remaining < 0)
      throw TypeError(TypeErrorKind::FuelExhausted,
                      "normalization fuel exhausted", at);
  }
};

class Normalizer {
 public:
  Normalizer(const Context& ctx, Fuel& fuel, bool use_rewrites)
      : ctx_(ctx), fuel_(fuel), use_rewrites_(use_rewrites) {}

  TermPtr run(TermPtr t) {
    while (true) {
      t = head_reduce(std::move(t));
      auto rebuilt = normalize_kids(t);
      if (rebuilt == t) return t;
      t = std::move(rebuilt);
      // a normalized child may have exposed a new head redex
      if (!head_reducible(t)) return t;
    }
  }

 private:
  TermPtr head_reduce(TermPtr t) {
    while (true) {
      if (use_rewrites_) {
        bool hit = false;
        for (const auto& rw : ctx_.rewrites()) {
          if (alpha_eq(t, rw.from)) {
            fuel_.spend(t);
            t = rw.to;
            hit = true;
            break;
          }
        }
        if (hit) continue;
      }
      if (t->tag == Tag::Hole) return t;
      auto s = pure_step(t, ctx_.algebra());
      if (!s || s->rule == "Hole") return t;
      fuel_.spend(t);
      t = std::move(s->next);
    }
  }

  bool head_reducible(const TermPtr& t) {
    if (use_rewrites_) {
      for (const auto& rw : ctx_.rewrites())
        if (alpha_eq(t, rw.from)) return true;
    }
    if (t->tag == Tag::Hole) return false;
    auto s = pure_step(t, ctx_.algebra());
    return s && s->rule != "Hole";
  }

  TermPtr normalize_kids(const TermPtr& t) {
    if (t->kids.empty()) return t;
    bool changed = false;
    std::vector<TermPtr> kids;
    kids.reserve(t->kids.size());
    for (const auto& k : t->kids) {
      auto nk = run(k);
      changed |= nk != k;
      kids.push_back(std::move(nk));
    }
    if (!changed) return t;
    auto copy = std::make_shared<Term>(*t);
    copy->kids = std::move(kids);
    return copy;
  }

  const Context& ctx_;
  Fuel& fuel_;
  bool use_rewrites_;
};

TermPtr norm_with(const Context& ctx, const TermPtr& t, Fuel& fuel,
                  bool rewrites) {
  return Normalizer(ctx, fuel, rewrites).run(t);
}

bool is_join_app(const TermPtr& t, TermPtr& a, TermPtr& b) {
  if (t->tag != Tag::App) return false;
  const auto& fn = t->kids[0];
  if (fn->tag != Tag::App || fn->kids[0]->tag != Tag::Prim ||
      fn->kids[0]->prim != Prim::Join)
    return false;
  a = fn->kids[1];
  b = t->kids[1];
  return true;
}

bool flow_norm(const Context& ctx, const TermPtr& n1, const TermPtr& n2,
               Fuel& fuel);

bool flow_impl(const Context& ctx, const TermPtr& l1, const TermPtr& l2,
               Fuel& fuel) {
  auto n1 = norm_with(ctx, l1, fuel, true);
  auto n2 = norm_with(ctx, l2, fuel, true);
  return flow_norm(ctx, n1, n2, fuel);
}

bool flow_norm(const Context& ctx, const TermPtr& n1, const TermPtr& n2,
               Fuel& fuel) {
  if (n1->tag == Tag::LabelLit && n2->tag == Tag::LabelLit)
    return ctx.algebra().dec_leq(n1->label, n2->label) == Decision::Yes;
  if (alpha_eq(n1, n2)) return true;
  if (n1->tag == Tag::LabelLit) {
    auto bot = ctx.algebra().bottom_opt();
    if (bot && n1->label == *bot) return true;
  }
  TermPtr a, b;
  if (is_join_app(n1, a, b))
    return flow_norm(ctx, a, n2, fuel) && flow_norm(ctx, b, n2, fuel);
  if (is_join_app(n2, a, b))
    return flow_norm(ctx, n1, a, fuel) || flow_norm(ctx, n1, b, fuel);
  return false;
}

bool cumul_impl(const Context& ctx, const TermPtr& a, const TermPtr& b,
                Fuel& fuel) {
  auto na = norm_with(ctx, a, fuel, true);
  auto nb = norm_with(ctx, b, fuel, true);
  if (alpha_eq(na, nb)) return true;
  if (na->tag == Tag::Forall && nb->tag == Tag::Forall) {
    if (!alpha_eq(na->kids[0], nb->kids[0])) return false;
    auto body_b = subst(nb->kids[1], mk_var(na->text), nb->text);
    auto inner = ctx.bind(na->text, na->kids[0]);
    return cumul_impl(inner, na->kids[1], body_b, fuel);
  }
  return false;
}

// ---------------------------------------------------------------------------
// The checker

TypedTermPtr make_tt(TermPtr term, TermPtr type,
                     std::vector<TypedTermPtr> kids = {}) {
  auto tt = std::make_shared<TypedTerm>();
  tt->term = std::move(term);
  tt->type = std::move(type);
  tt->kids = std::move(kids);
  return tt;
}

class Checker {
 public:
  Checker(Fuel& fuel) : fuel_(fuel) {}

  TypedTermPtr infer(const Context& ctx, const TermPtr& t);
  TypedTermPtr check(const Context& ctx, const TermPtr& t, TermPtr expected);

 private:
  TermPtr norm(const Context& ctx, const TermPtr& t) {
    return norm_with(ctx, t, fuel_, true);
  }

  bool conv(const Context& ctx, const TermPtr& a, const TermPtr& b) {
    return alpha_eq(norm(ctx, a), norm(ctx, b));
  }

  void require_flow(const Context& ctx, const TermPtr& l1, const TermPtr& l2,
                    const TermPtr& at) {
    if (!flow_impl(ctx, l1, l2, fuel_))
      throw TypeError(TypeErrorKind::FlowViolation,
                      pretty(l1) + " does not flow to " + pretty(l2), at);
  }

  TermPtr ambient_or_fail(const Context& ctx, const TermPtr& at,
                          const char* what) {
    if (ctx.ambient()) return ctx.ambient();
    throw TypeError(TypeErrorKind::UnresolvedLabel,
                    std::string("no expected type or ambient label "
                                "determines the label of ") +
                        what,
                    at);
  }

  // Normalized Labeled shape, or error.
  std::pair<TermPtr, TermPtr> as_labeled(const TermPtr& ty, const TermPtr& at) {
    if (ty->tag == Tag::LabeledT) return {ty->kids[0], ty->kids[1]};
    throw TypeError(TypeErrorKind::Mismatch, "expected a labeled value", at,
                    nullptr, ty);
  }

  std::pair<TermPtr, TermPtr> as_ref(const TermPtr& ty, const TermPtr& at) {
    if (ty->tag == Tag::RefT) return {ty->kids[0], ty->kids[1]};
    throw TypeError(TypeErrorKind::Mismatch, "expected a reference", at,
                    nullptr, ty);
  }

  std::pair<TermPtr, TermPtr> as_dio(const TermPtr& ty, const TermPtr& at) {
    if (ty->tag == Tag::DioT) return {ty->kids[0], ty->kids[1]};
    throw TypeError(TypeErrorKind::Mismatch, "expected a computation", at,
                    nullptr, ty);
  }

  TypedTermPtr check_type(const Context& ctx, const TermPtr& t) {
    return check(ctx, t, mk_type());
  }

  // Infers s : Labeled l S. For bare labeled values, whose label cannot be
  // inferred, falls back to checking against Labeled fallback_label S.
  TypedTermPtr labeled_or_fallback(const Context& ctx, const TermPtr& s,
                                   const TermPtr& fallback_label,
                                   const TermPtr& fallback_ty) {
    if ((s->tag == Tag::LabeledVal || s->tag == Tag::LabelOp) &&
        fallback_label) {
      TermPtr ty = fallback_ty;
      if (!ty) {
        if (s->kids[0]->tag == Tag::Hole)
          ty = mk_int_t();  // • inhabits every type; any representative works
        else
          ty = infer(ctx, s->kids[0])->type;
      }
      return check(ctx, s,
                   norm(ctx, mk_labeled_t(fallback_label, ty)));
    }
    return infer(ctx, s);
  }

  Fuel& fuel_;
};

TypedTermPtr Checker::infer(const Context& ctx, const TermPtr& t) {
  const auto& alg = ctx.algebra();
  switch (t->tag) {
    case Tag::IntLit: return make_tt(t, mk_int_t());
    case Tag::BoolLit: return make_tt(t, mk_bool_t());
    case Tag::UnitLit: return make_tt(t, mk_unit_t());
    case Tag::StrLit: return make_tt(t, mk_str_t());
    case Tag::LabelLit:
      if (!alg.contains(t->label))
        throw TypeError(TypeErrorKind::Mismatch,
                        "label " + to_string(t->label) +
                            " is not in the active lattice (" +
                            std::string(alg.name()) + ")",
                        t);
      return make_tt(t, mk_label_t());
    case Tag::Prim:
      switch (t->prim) {
        case Prim::Add:
          return make_tt(t, mk_forall(fresh_name("_"), mk_int_t(),
                                      mk_forall(fresh_name("_"), mk_int_t(),
                                                mk_int_t())));
        case Prim::Concat:
          return make_tt(t, mk_forall(fresh_name("_"), mk_str_t(),
                                      mk_forall(fresh_name("_"), mk_str_t(),
                                                mk_str_t())));
        case Prim::Join:
          return make_tt(t, mk_forall(fresh_name("_"), mk_label_t(),
                                      mk_forall(fresh_name("_"), mk_label_t(),
                                                mk_label_t())));
      }
      break;
    case Tag::Var: {
      auto ty = ctx.lookup(t->text);
      if (!ty)
        throw TypeError(TypeErrorKind::UnboundVariable,
                        "variable " + name_hint(t->text) + " is not in scope",
                        t);
      return make_tt(t, norm(ctx, ty));
    }
    case Tag::TypeU:
    case Tag::IntT:
    case Tag::BoolT:
    case Tag::UnitT:
    case Tag::StrT:
    case Tag::LabelT:
      return make_tt(t, mk_type());
    case Tag::DioT:
    case Tag::LabeledT:
    case Tag::RefT: {
      auto l = check(ctx, t->kids[0], mk_label_t());
      auto ty = check_type(ctx, t->kids[1]);
      return make_tt(t, mk_type(), {l, ty});
    }
    case Tag::Forall: {
      auto dom = check_type(ctx, t->kids[0]);
      auto inner = ctx.bind(t->text, norm(ctx, t->kids[0]));
      auto cod = check_type(inner, t->kids[1]);
      return make_tt(t, mk_type(), {dom, cod});
    }
    case Tag::Lambda: {
      auto dom = check_type(ctx, t->kids[0]);
      auto dom_n = norm(ctx, t->kids[0]);
      auto inner = ctx.bind(t->text, dom_n);
      auto body = infer(inner, t->kids[1]);
      return make_tt(t, mk_forall(t->text, dom_n, body->type), {dom, body});
    }
    case Tag::App: {
      auto fn = infer(ctx, t->kids[0]);
      if (fn->type->tag != Tag::Forall)
        throw TypeError(TypeErrorKind::NotAFunction,
                        "application head is not a function", t->kids[0],
                        nullptr, fn->type);
      auto arg = check(ctx, t->kids[1], fn->type->kids[0]);
      auto res = norm(ctx, subst(fn->type->kids[1], t->kids[1],
                                 fn->type->text));
      return make_tt(t, res, {fn, arg});
    }
    case Tag::If: {
      auto c = check(ctx, t->kids[0], mk_bool_t());
      auto scrutinee = norm(ctx, t->kids[0]);
      auto then_ctx = ctx.assume(scrutinee, mk_bool(true));
      auto else_ctx = ctx.assume(scrutinee, mk_bool(false));
      auto a = infer(then_ctx, t->kids[1]);
      auto b = check(else_ctx, t->kids[2], a->type);
      return make_tt(t, a->type, {c, a, b});
    }
    case Tag::Pure:
    case Tag::DioVal: {
      auto l = ambient_or_fail(ctx, t, t->tag == Tag::Pure ? "pure" : "DIO");
      auto payload = infer(ctx, t->kids[0]);
      return make_tt(t, norm(ctx, mk_dio_t(l, payload->type)), {payload});
    }
    case Tag::LabeledVal:
    case Tag::LabelOp:
      throw TypeError(TypeErrorKind::UnresolvedLabel,
                      "the label of a labeled value is determined by the "
                      "expected type",
                      t);
    case Tag::Unlabel: {
      auto s = infer(ctx, t->kids[0]);
      auto [ll, ty] = as_labeled(s->type, t->kids[0]);
      TermPtr lh = ctx.ambient() ? ctx.ambient() : ll;
      require_flow(ctx, ll, lh, t);
      return make_tt(t, norm(ctx, mk_dio_t(lh, ty)), {s});
    }
    case Tag::Bind: {
      const auto& k = t->kids[1];
      if (k->tag == Tag::Lambda) {
        auto dom = check_type(ctx, k->kids[0]);
        auto dom_n = norm(ctx, k->kids[0]);
        auto inner = ctx.bind(k->text, dom_n);
        auto body = infer(inner, k->kids[1]);
        auto [l, res] = as_dio(body->type, k->kids[1]);
        auto s = check(ctx, t->kids[0], norm(ctx, mk_dio_t(l, dom_n)));
        auto fn = make_tt(k, mk_forall(k->text, dom_n, body->type),
                          {dom, body});
        return make_tt(t, norm(ctx, mk_dio_t(l, res)), {s, fn});
      }
      auto s = infer(ctx, t->kids[0]);
      auto [l, src] = as_dio(s->type, t->kids[0]);
      auto fn = infer(ctx, k);
      if (fn->type->tag != Tag::Forall)
        throw TypeError(TypeErrorKind::NotAFunction,
                        "bind continuation is not a function", k, nullptr,
                        fn->type);
      if (!conv(ctx, fn->type->kids[0], src))
        throw TypeError(TypeErrorKind::Mismatch,
                        "bind continuation domain does not match", k,
                        src, fn->type->kids[0]);
      auto [l2, res] = as_dio(norm(ctx, fn->type->kids[1]), k);
      if (!conv(ctx, l2, l))
        throw TypeError(TypeErrorKind::Mismatch,
                        "bind sides disagree on the computation label", t, l,
                        l2);
      return make_tt(t, norm(ctx, mk_dio_t(l, res)), {s, fn});
    }
    case Tag::Plug:
    case Tag::PlugHole: {
      auto ll = ambient_or_fail(ctx, t, "plug");
      auto s = infer(ctx.without_ambient(), t->kids[0]);
      auto [lh, ty] = as_dio(s->type, t->kids[0]);
      require_flow(ctx, ll, lh, t);
      return make_tt(t, norm(ctx, mk_dio_t(ll, mk_labeled_t(lh, ty))), {s});
    }
    case Tag::NewRef: {
      auto lh_tt = check(ctx, t->kids[0], mk_label_t());
      auto lh = norm(ctx, t->kids[0]);
      auto s = labeled_or_fallback(ctx, t->kids[1], lh, nullptr);
      auto [lm, ty] = as_labeled(s->type, t->kids[1]);
      TermPtr ll = ctx.ambient() ? ctx.ambient() : lm;
      require_flow(ctx, ll, lm, t);
      require_flow(ctx, lm, lh, t);
      return make_tt(t, norm(ctx, mk_dio_t(ll, mk_ref_t(lh, ty))),
                     {lh_tt, s});
    }
    case Tag::ReadRef: {
      auto s = infer(ctx, t->kids[0]);
      auto [lh, ty] = as_ref(s->type, t->kids[0]);
      TermPtr ll = ctx.ambient() ? ctx.ambient() : lh;
      require_flow(ctx, ll, lh, t);
      return make_tt(t, norm(ctx, mk_dio_t(ll, mk_labeled_t(lh, ty))), {s});
    }
    case Tag::WriteRef: {
      auto s = infer(ctx, t->kids[0]);
      auto [lh, ty] = as_ref(s->type, t->kids[0]);
      auto v = labeled_or_fallback(ctx, t->kids[1], lh, ty);
      auto [lm, vty] = as_labeled(v->type, t->kids[1]);
      if (!conv(ctx, vty, ty))
        throw TypeError(TypeErrorKind::Mismatch,
                        "written value does not match the reference", t, ty,
                        vty);
      TermPtr ll = ctx.ambient() ? ctx.ambient() : lm;
      require_flow(ctx, ll, lm, t);
      require_flow(ctx, lm, lh, t);
      return make_tt(t, norm(ctx, mk_dio_t(ll, mk_unit_t())), {s, v});
    }
    case Tag::RefVal: {
      auto l_tt = check(ctx, t->kids[0], mk_label_t());
      auto ln = norm(ctx, t->kids[0]);
      if (ln->tag == Tag::LabelLit && t->ref_index && ctx.store_typing()) {
        if (auto ty = ctx.store_typing()->cell_type(ln->label, *t->ref_index))
          return make_tt(t, norm(ctx, mk_ref_t(ln, ty)), {l_tt});
      }
      throw TypeError(TypeErrorKind::UnresolvedLabel,
                      "reference content type is not known here", t);
    }
    case Tag::Hole:
      throw TypeError(TypeErrorKind::Mismatch,
                      "\xe2\x80\xa2 takes its type from the expected type",
                      t);
    case Tag::Ascribe: {
      check_type(ctx, t->kids[1]);
      auto ty = norm(ctx, t->kids[1]);
      return check(ctx, t->kids[0], ty);
    }
  }
  throw TypeError(TypeErrorKind::Mismatch, "unsupported term", t);
}

TypedTermPtr Checker::check(const Context& ctx, const TermPtr& t,
                            TermPtr expected) {
  expected = norm(ctx, expected);
  switch (t->tag) {
    case Tag::Lambda: {
      if (expected->tag != Tag::Forall)
        break;
      auto dom = check_type(ctx, t->kids[0]);
      auto ann_n = norm(ctx, t->kids[0]);
      if (!alpha_eq(ann_n, expected->kids[0]))
        throw TypeError(TypeErrorKind::Mismatch,
                        "binder annotation does not match the function type",
                        t, expected->kids[0], ann_n);
      auto cod = subst(expected->kids[1], mk_var(t->text), expected->text);
      auto inner = ctx.bind(t->text, ann_n);
      auto body = check(inner, t->kids[1], cod);
      return make_tt(t, expected, {dom, body});
    }
    case Tag::Hole:
      check_type(ctx, expected);
      return make_tt(t, expected);
    case Tag::Pure:
    case Tag::DioVal: {
      auto dio = split_dio(expected);
      if (!dio) break;
      auto inner = ctx.with_ambient(dio->first);
      auto payload = check(inner, t->kids[0], dio->second);
      return make_tt(t, expected, {payload});
    }
    case Tag::LabeledVal:
    case Tag::LabelOp: {
      if (expected->tag != Tag::LabeledT) break;
      auto payload = check(ctx, t->kids[0], expected->kids[1]);
      return make_tt(t, expected, {payload});
    }
    case Tag::RefVal: {
      if (expected->tag != Tag::RefT) break;
      auto l_tt = check(ctx, t->kids[0], mk_label_t());
      auto ln = norm(ctx, t->kids[0]);
      if (!alpha_eq(ln, expected->kids[0]))
        throw TypeError(TypeErrorKind::Mismatch,
                        "reference label does not match its type", t,
                        expected->kids[0], ln);
      if (ln->tag == Tag::LabelLit && t->ref_index && ctx.store_typing()) {
        if (auto ty = ctx.store_typing()->cell_type(ln->label, *t->ref_index))
          if (!conv(ctx, ty, expected->kids[1]))
            throw TypeError(TypeErrorKind::Mismatch,
                            "reference cell has a different type", t,
                            expected->kids[1], ty);
      }
      return make_tt(t, expected, {l_tt});
    }
    case Tag::Bind: {
      auto dio = split_dio(expected);
      if (!dio) break;
      const auto& [l, res] = *dio;
      auto inner = ctx.with_ambient(l);
      const auto& k = t->kids[1];
      if (k->tag == Tag::Lambda) {
        auto dom = check_type(ctx, k->kids[0]);
        auto dom_n = norm(ctx, k->kids[0]);
        auto s = check(inner, t->kids[0], mk_dio_t(l, dom_n));
        auto body_ctx = inner.bind(k->text, dom_n);
        auto body = check(body_ctx, k->kids[1], mk_dio_t(l, res));
        auto fn = make_tt(k, norm(ctx, mk_forall(k->text, dom_n,
                                                 mk_dio_t(l, res))),
                          {dom, body});
        return make_tt(t, expected, {s, fn});
      }
      auto s = infer(inner, t->kids[0]);
      auto [l2, src] = as_dio(s->type, t->kids[0]);
      if (!conv(ctx, l2, l))
        throw TypeError(TypeErrorKind::Mismatch,
                        "bind sides disagree on the computation label", t, l,
                        l2);
      auto fn = check(inner, k,
                      mk_forall(fresh_name("_"), src, mk_dio_t(l, res)));
      return make_tt(t, expected, {s, fn});
    }
    case Tag::Unlabel: {
      auto dio = split_dio(expected);
      if (!dio) break;
      const auto& [lh, res] = *dio;
      auto s = labeled_or_fallback(ctx, t->kids[0], lh, res);
      auto [ll, ty] = as_labeled(s->type, t->kids[0]);
      require_flow(ctx, ll, lh, t);
      if (!conv(ctx, ty, res))
        throw TypeError(TypeErrorKind::Mismatch,
                        "unlabeled value has a different type", t, res, ty);
      return make_tt(t, expected, {s});
    }
    case Tag::Plug:
    case Tag::PlugHole: {
      auto dio = split_dio(expected);
      if (!dio) break;
      const auto& [ll, inner_ty] = *dio;
      auto [lh, ty] = as_labeled(inner_ty, t);
      require_flow(ctx, ll, lh, t);
      auto s = check(ctx.with_ambient(lh), t->kids[0], mk_dio_t(lh, ty));
      return make_tt(t, expected, {s});
    }
    case Tag::NewRef: {
      auto dio = split_dio(expected);
      if (!dio) break;
      const auto& [ll, inner_ty] = *dio;
      auto [lh, ty] = as_ref(inner_ty, t);
      auto lh_tt = check(ctx, t->kids[0], mk_label_t());
      auto lhn = norm(ctx, t->kids[0]);
      if (!alpha_eq(lhn, lh))
        throw TypeError(TypeErrorKind::Mismatch,
                        "allocation label does not match the reference type",
                        t, lh, lhn);
      auto s = labeled_or_fallback(ctx, t->kids[1], lh, ty);
      auto [lm, vty] = as_labeled(s->type, t->kids[1]);
      if (!conv(ctx, vty, ty))
        throw TypeError(TypeErrorKind::Mismatch,
                        "initial value does not match the reference type", t,
                        ty, vty);
      require_flow(ctx, ll, lm, t);
      require_flow(ctx, lm, lh, t);
      return make_tt(t, expected, {lh_tt, s});
    }
    case Tag::ReadRef: {
      auto dio = split_dio(expected);
      if (!dio) break;
      const auto& [ll, inner_ty] = *dio;
      auto [lh, ty] = as_labeled(inner_ty, t);
      require_flow(ctx, ll, lh, t);
      auto s = check(ctx, t->kids[0], mk_ref_t(lh, ty));
      return make_tt(t, expected, {s});
    }
    case Tag::WriteRef: {
      auto dio = split_dio(expected);
      if (!dio) break;
      const auto& [ll, inner_ty] = *dio;
      if (inner_ty->tag != Tag::UnitT)
        throw TypeError(TypeErrorKind::Mismatch,
                        "write computations produce unit", t, nullptr,
                        inner_ty);
      TypedTermPtr s;
      try {
        s = infer(ctx, t->kids[0]);
      } catch (const TypeError& e) {
        // a reference with an erased index has no recorded cell type; its
        // label is still right there, and the payload supplies the type
        if (e.kind != TypeErrorKind::UnresolvedLabel ||
            t->kids[0]->tag != Tag::RefVal)
          throw;
        auto lref = norm(ctx, t->kids[0]->kids[0]);
        auto v0 = labeled_or_fallback(ctx, t->kids[1], lref, nullptr);
        auto [lm0, vty0] = as_labeled(v0->type, t->kids[1]);
        s = check(ctx, t->kids[0], mk_ref_t(lref, vty0));
      }
      auto [lh, ty] = as_ref(s->type, t->kids[0]);
      auto v = labeled_or_fallback(ctx, t->kids[1], lh, ty);
      auto [lm, vty] = as_labeled(v->type, t->kids[1]);
      if (!conv(ctx, vty, ty))
        throw TypeError(TypeErrorKind::Mismatch,
                        "written value does not match the reference", t, ty,
                        vty);
      require_flow(ctx, ll, lm, t);
      require_flow(ctx, lm, lh, t);
      return make_tt(t, expected, {s, v});
    }
    case Tag::App: {
      // A beta redex checks by pushing the expected type into the body,
      // with the binder convertible to the argument. Reduction produces
      // these when a continuation meets its value.
      const auto& fn = t->kids[0];
      if (fn->tag != Tag::Lambda) break;
      auto dom = check_type(ctx, fn->kids[0]);
      auto dom_n = norm(ctx, fn->kids[0]);
      auto arg = check(ctx, t->kids[1], dom_n);
      auto inner = ctx.bind(fn->text, dom_n)
                       .assume(mk_var(fn->text), norm(ctx, t->kids[1]));
      auto body = check(inner, fn->kids[1], expected);
      auto fn_tt = make_tt(fn, norm(ctx, mk_forall(fn->text, dom_n,
                                                   body->type)),
                           {dom, body});
      return make_tt(t, expected, {fn_tt, arg});
    }
    case Tag::If: {
      auto c = check(ctx, t->kids[0], mk_bool_t());
      auto scrutinee = norm(ctx, t->kids[0]);
      auto a = check(ctx.assume(scrutinee, mk_bool(true)), t->kids[1],
                     expected);
      auto b = check(ctx.assume(scrutinee, mk_bool(false)), t->kids[2],
                     expected);
      return make_tt(t, expected, {c, a, b});
    }
    case Tag::Ascribe: {
      check_type(ctx, t->kids[1]);
      auto ty = norm(ctx, t->kids[1]);
      auto inner = check(ctx, t->kids[0], ty);
      if (!cumul_impl(ctx, ty, expected, fuel_))
        throw TypeError(TypeErrorKind::Mismatch,
                        "ascribed type does not fit here", t, expected, ty);
      return inner;
    }
    default:
      break;
  }
  auto inferred = infer(ctx, t);
  if (!cumul_impl(ctx, inferred->type, expected, fuel_))
    throw TypeError(TypeErrorKind::Mismatch, "type mismatch", t, expected,
                    inferred->type);
  return make_tt(inferred->term, expected, inferred->kids);
}

}  // namespace

TermPtr normalize(const Context& ctx, const TermPtr& t, long fuel) {
  Fuel f{fuel};
  return norm_with(ctx, t, f, false);
}

bool convertible(const Context& ctx, const TermPtr& a, const TermPtr& b,
                 long fuel) {
  Fuel f{fuel};
  return alpha_eq(norm_with(ctx, a, f, true), norm_with(ctx, b, f, true));
}

bool cumul(const Context& ctx, const TermPtr& a, const TermPtr& b, long fuel) {
  Fuel f{fuel};
  return cumul_impl(ctx, a, b, f);
}

bool flow(const Context& ctx, const TermPtr& l1, const TermPtr& l2,
          long fuel) {
  Fuel f{fuel};
  return flow_impl(ctx, l1, l2, f);
}

TermPtr infer(const Context& ctx, const TermPtr& t, long fuel) {
  return elaborate(ctx, t, fuel)->type;
}

TypedTermPtr elaborate(const Context& ctx, const TermPtr& t, long fuel) {
  Fuel f{fuel};
  Checker c(f);
  return c.infer(ctx, t);
}

TypedTermPtr elaborate_against(const Context& ctx, const TermPtr& t,
                               const TermPtr& expected, long fuel) {
  Fuel f{fuel};
  Checker c(f);
  return c.check(ctx, t, expected);
}

std::optional<std::pair<TermPtr, TermPtr>> split_dio(const TermPtr& type) {
  if (type->tag != Tag::DioT) return std::nullopt;
  return std::make_pair(type->kids[0], type->kids[1]);
}

std::optional<Label> closed_label(const TermPtr& label_term) {
  if (label_term->tag != Tag::LabelLit) return std::nullopt;
  return label_term->label;
}

}  // namespace ttsec
