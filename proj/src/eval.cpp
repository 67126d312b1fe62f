#include "ttsec/eval.hpp"

#include "ttsec/pretty.hpp"

namespace ttsec {

namespace {

std::string kind_str(EvalErrorKind kind) {
  switch (kind) {
    case EvalErrorKind::Stuck: return "stuck";
    case EvalErrorKind::FuelExhausted: return "fuel exhausted";
    case EvalErrorKind::BadIndex: return "invalid reference index";
    case EvalErrorKind::Preservation: return "preservation failure";
  }
  return "?";
}

}  // namespace

EvalError::EvalError(EvalErrorKind kind, const std::string& msg)
    : std::runtime_error(kind_str(kind) + ": " + msg), kind(kind) {}

const Segment* Store::find(const Label& l) const {
  auto it = segments_.find(l);
  return it == segments_.end() ? nullptr : &it->second;
}

TermPtr Store::cell_type(const Label& l, std::uint64_t n) const {
  const auto* seg = find(l);
  if (!seg || seg->erased || n >= seg->cells.size()) return nullptr;
  return seg->cells[n].type;
}

bool store_equal(const Store& a, const Store& b) {
  auto check_one_way = [](const Store& x, const Store& y) {
    for (const auto& [label, seg] : x.segments()) {
      const auto* other = y.find(label);
      if (!other) {
        if (seg.erased || !seg.cells.empty()) return false;
        continue;
      }
      if (seg.erased != other->erased) return false;
      if (seg.cells.size() != other->cells.size()) return false;
      for (std::size_t i = 0; i < seg.cells.size(); ++i)
        if (!alpha_eq(seg.cells[i].value, other->cells[i].value)) return false;
    }
    return true;
  };
  return check_one_way(a, b) && check_one_way(b, a);
}

std::string store_digest(const Store& s) {
  std::string out;
  for (const auto& [label, seg] : s.segments()) {
    if (!out.empty()) out += " ";
    out += to_string(label) + "=";
    out += seg.erased ? "\xe2\x80\xa2" : std::to_string(seg.cells.size());
  }
  return out.empty() ? "-" : out;
}

Configuration make_config(const LabelAlgebra& alg, Store store, TermPtr term,
                          TermPtr dio_type, long check_fuel) {
  Configuration c;
  c.algebra = &alg;
  c.store = std::move(store);
  Context ctx = Context(alg).with_store_typing(&c.store);
  auto ty = normalize(ctx, dio_type, check_fuel);
  if (ty->tag != Tag::DioT)
    throw TypeError(TypeErrorKind::Mismatch,
                    "a configuration needs a computation type", term, nullptr,
                    ty);
  c.term = elaborate_against(ctx, term, ty, check_fuel);
  return c;
}

bool config_equal(const Configuration& a, const Configuration& b) {
  return alpha_eq(a.raw(), b.raw()) && store_equal(a.store, b.store);
}

namespace {

struct RawStep {
  TermPtr term;
  Store store;
  std::string rule;
};

// newRef/writeRef store effects; index nullopt models |•| = • and writing
// through an erased index (no update).
std::optional<std::uint64_t> append_cell(Store& store, const Label& l,
                                         const TermPtr& v, const TermPtr& ty) {
  auto& seg = store.segment(l);
  if (seg.erased) return std::nullopt;
  seg.cells.push_back({v, ty});
  return seg.cells.size() - 1;
}

void write_cell(Store& store, const Label& l,
                std::optional<std::uint64_t> index, const TermPtr& v) {
  auto& seg = store.segment(l);
  if (seg.erased) return;  // writing to an erased cell yields no update
  if (!index || *index >= seg.cells.size())
    throw EvalError(EvalErrorKind::BadIndex,
                    "write to " + to_string(l) + "[" +
                        (index ? std::to_string(*index) : "\xe2\x80\xa2") +
                        "] of size " + std::to_string(seg.cells.size()));
  seg.cells[*index].value = v;
}

// The label argument of newRef / Ref at run time must be a literal.
Label literal_label(const TermPtr& t, const char* who) {
  if (t->tag != Tag::LabelLit)
    throw EvalError(EvalErrorKind::Stuck,
                    std::string(who) + " needs a literal label, got " +
                        pretty(t));
  return t->label;
}

// Content type recorded for cells allocated by this NewRef node, read off
// the elaborated type DIO lL (Ref lH S).
TermPtr new_ref_cell_type(const TypedTermPtr& node) {
  auto dio = split_dio(node->type);
  if (dio && dio->second->tag == Tag::RefT) return dio->second->kids[1];
  return mk_type();  // unreachable for well-typed configurations
}

std::optional<RawStep> raw_monadic_step(const LabelAlgebra& alg,
                                        const Store& store,
                                        const TypedTermPtr& node, long& fuel,
                                        std::vector<std::string>* trace);

Configuration subconfig(const Configuration& c, const TypedTermPtr& node) {
  Configuration inner;
  inner.algebra = c.algebra;
  inner.store = c.store;
  inner.term = node;
  return inner;
}

// Big-step on raw pieces: used by the plug premise.
std::pair<Store, TermPtr> run_to_value(const LabelAlgebra& alg, Store store,
                                       const TypedTermPtr& node, long& fuel,
                                       std::vector<std::string>* trace) {
  Configuration c;
  c.algebra = &alg;
  c.store = std::move(store);
  c.term = node;
  c = big_step(std::move(c), fuel, trace);
  return {std::move(c.store), c.raw()};
}

std::optional<RawStep> raw_monadic_step(const LabelAlgebra& alg,
                                        const Store& store,
                                        const TypedTermPtr& node, long& fuel,
                                        std::vector<std::string>* trace) {
  const TermPtr& t = node->term;
  if (auto s = pure_step(t, alg))
    return RawStep{s->next, store, "Lift(" + s->rule + ")"};

  switch (t->tag) {
    case Tag::Bind: {
      if (auto s = raw_monadic_step(alg, store, node->kids[0], fuel, trace))
        return RawStep{mk_bind(s->term, t->kids[1]), std::move(s->store),
                       "Bind2(" + s->rule + ")"};
      return std::nullopt;
    }
    case Tag::Plug: {
      auto [store2, val] =
          run_to_value(alg, store, node->kids[0], fuel, trace);
      if (val->tag != Tag::DioVal)
        throw EvalError(EvalErrorKind::Stuck,
                        "plug premise ended in a non-computation value: " +
                            pretty(val));
      return RawStep{mk_pure(mk_labeled_val(val->kids[0])), std::move(store2),
                     "Plug"};
    }
    case Tag::NewRef: {
      const auto& payload = t->kids[1];
      if (payload->tag != Tag::LabeledVal || !is_value(payload->kids[0], alg))
        return std::nullopt;
      Label l = literal_label(t->kids[0], "newRef");
      Store next = store;
      auto idx = append_cell(next, l, payload->kids[0],
                             new_ref_cell_type(node));
      return RawStep{mk_pure(mk_ref_val(t->kids[0], idx)), std::move(next),
                     "New2"};
    }
    case Tag::WriteRef: {
      const auto& ref = t->kids[0];
      const auto& payload = t->kids[1];
      if (ref->tag != Tag::RefVal || payload->tag != Tag::LabeledVal ||
          !is_value(payload->kids[0], alg))
        return std::nullopt;
      Label l = literal_label(ref->kids[0], "writeRef");
      Store next = store;
      write_cell(next, l, ref->ref_index, payload->kids[0]);
      return RawStep{mk_pure(mk_unit()), std::move(next), "Write3"};
    }
    case Tag::ReadRef: {
      const auto& ref = t->kids[0];
      if (ref->tag != Tag::RefVal) return std::nullopt;
      Label l = literal_label(ref->kids[0], "readRef");
      const auto* seg = store.find(l);
      if (seg && seg->erased)  // reading from an erased compartment yields •
        return RawStep{mk_pure(mk_labeled_val(mk_hole())), store, "Read2"};
      if (!ref->ref_index || !seg || *ref->ref_index >= seg->cells.size())
        throw EvalError(
            EvalErrorKind::BadIndex,
            "read from " + to_string(l) + "[" +
                (ref->ref_index ? std::to_string(*ref->ref_index)
                                : "\xe2\x80\xa2") +
                "]");
      return RawStep{
          mk_pure(mk_labeled_val(seg->cells[*ref->ref_index].value)), store,
          "Read2"};
    }
    default:
      return std::nullopt;
  }
}

}  // namespace

std::optional<MonadicStep> monadic_step(const Configuration& c, long& fuel) {
  if (fuel <= 0)
    throw EvalError(EvalErrorKind::FuelExhausted, "out of evaluation fuel");
  auto s = raw_monadic_step(*c.algebra, c.store, c.term, fuel, nullptr);
  if (!s) return std::nullopt;
  --fuel;
  try {
    return MonadicStep{
        make_config(*c.algebra, std::move(s->store), s->term, c.type()),
        s->rule};
  } catch (const TypeError& e) {
    throw EvalError(EvalErrorKind::Preservation,
                    "after " + s->rule + " on " + pretty(c.raw()) + ": " +
                        e.what());
  }
}

Configuration big_step(Configuration c, long& fuel,
                       std::vector<std::string>* trace) {
  while (true) {
    auto s = monadic_step(c, fuel);
    if (!s) {
      if (!is_value(c.raw(), *c.algebra))
        throw EvalError(EvalErrorKind::Stuck,
                        "no rule applies to " + pretty(c.raw()));
      return c;
    }
    c = std::move(s->next);
    if (trace)
      trace->push_back(s->rule + " | " + std::string(head_name(c.raw()->tag)) +
                       " | " + store_digest(c.store));
  }
}

std::vector<RuleApplication> enumerate_monadic_rules(const Configuration& c,
                                                     long& fuel) {
  std::vector<RuleApplication> out;
  const auto& alg = *c.algebra;
  const TermPtr& t = c.raw();

  for (const auto& p : enumerate_pure_steps(t, alg))
    out.push_back({"Lift(" + p.rule + ")", p.next, c.store});

  switch (t->tag) {
    case Tag::Bind: {
      auto inner = subconfig(c, c.term->kids[0]);
      for (auto& s : enumerate_monadic_rules(inner, fuel))
        out.push_back({"Bind2(" + s.rule + ")",
                       mk_bind(s.term, t->kids[1]), std::move(s.store)});
      break;
    }
    case Tag::Plug: {
      try {
        long budget = fuel;
        auto [store2, val] =
            run_to_value(alg, c.store, c.term->kids[0], budget, nullptr);
        if (val->tag == Tag::DioVal)
          out.push_back({"Plug", mk_pure(mk_labeled_val(val->kids[0])),
                         std::move(store2)});
      } catch (const EvalError&) {
        // premise not derivable within fuel; the rule does not apply
      }
      break;
    }
    default: {
      if (auto s = raw_monadic_step(alg, c.store, c.term, fuel, nullptr)) {
        if (s->rule == "New2" || s->rule == "Write3" || s->rule == "Read2")
          out.push_back({s->rule, s->term, std::move(s->store)});
      }
      break;
    }
  }
  return out;
}

}  // namespace ttsec
