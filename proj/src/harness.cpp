#include "ttsec/harness.hpp"

#include <algorithm>
#include <functional>

#include "ttsec/parser.hpp"
#include "ttsec/pretty.hpp"

namespace ttsec {

namespace {

// ---------------------------------------------------------------------------
// Type-directed program generation. Candidates are always produced against a
// goal type whose labels are literals, so the checker accepts them by
// construction; elaboration re-verifies anyway.

class Builder {
 public:
  Builder(const GenSpec& spec, std::mt19937_64& rng)
      : spec_(spec),
        rng_(rng),
        alg_(*spec.algebra),
        pool_(alg_.carrier_sample()) {}

  GenProgram build() {
    GenProgram p;
    p.ambient = spec_.ambient ? *spec_.ambient : any_label();
    auto goal = goal_type(p.ambient);
    p.term = comp(p.ambient, goal, spec_.max_depth);
    p.type = mk_dio_t(mk_label_lit(p.ambient), goal);
    p.slots = std::move(slots_);
    p.store = std::move(store_);
    return p;
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool coin(int percent) { return pick(100) < percent; }
  std::uint64_t raw() { return rng_(); }

  const Label& any_label() { return pool_[pick(static_cast<int>(pool_.size()))]; }

  Label above(const Label& l) {
    for (int i = 0; i < 8; ++i) {
      const auto& cand = any_label();
      if (alg_.leq(l, cand)) return cand;
    }
    return l;
  }

  Label below(const Label& l) {
    for (int i = 0; i < 8; ++i) {
      const auto& cand = any_label();
      if (alg_.leq(cand, l)) return cand;
    }
    return l;
  }

  Label between(const Label& lo, const Label& hi) {
    for (int i = 0; i < 8; ++i) {
      const auto& cand = any_label();
      if (alg_.leq(lo, cand) && alg_.leq(cand, hi)) return cand;
    }
    return hi;
  }

  TermPtr base_type() {
    switch (pick(4)) {
      case 0: return mk_int_t();
      case 1: return mk_bool_t();
      case 2: return mk_str_t();
      default: return mk_unit_t();
    }
  }

  // Intermediate types for binds and goals.
  TermPtr value_type(const Label& l, int depth) {
    int r = pick(100);
    if (depth > 0 && r < 20)
      return mk_labeled_t(mk_label_lit(above(l)), base_type());
    if (depth > 0 && r < 32)
      return mk_ref_t(mk_label_lit(above(l)), base_type());
    return base_type();
  }

  TermPtr goal_type(const Label& ambient) {
    return value_type(ambient, spec_.max_depth);
  }

  // Deterministic closed value of a (base or labeled) type.
  TermPtr closed_value(const TermPtr& ty, std::uint64_t k) {
    switch (ty->tag) {
      case Tag::IntT: return mk_int(static_cast<std::int64_t>(k % 1000));
      case Tag::BoolT: return mk_bool(k % 2 == 0);
      case Tag::StrT: return mk_str("v" + std::to_string(k % 1000));
      case Tag::UnitT: return mk_unit();
      case Tag::LabelT:
        return mk_label_lit(pool_[k % pool_.size()]);
      case Tag::LabeledT:
        return mk_labeled_val(closed_value(ty->kids[1], k));
      default:
        throw GenError("no closed value for type " + pretty(ty));
    }
  }

  std::optional<TermPtr> var_of(const TermPtr& ty) {
    std::vector<const std::pair<std::string, TermPtr>*> hits;
    for (const auto& v : vars_)
      if (alpha_eq(v.second, ty)) hits.push_back(&v);
    if (hits.empty()) return std::nullopt;
    return mk_var(hits[static_cast<std::size_t>(pick(static_cast<int>(hits.size())))]->first);
  }

  TermPtr labeled_value(const Label& lab, const TermPtr& payload_ty,
                        int depth) {
    auto full = mk_labeled_t(mk_label_lit(lab), payload_ty);
    if (coin(40))
      if (auto v = var_of(full)) return *v;
    bool base = payload_ty->kids.empty() && payload_ty->tag != Tag::LabelT;
    if (base && static_cast<int>(slots_.size()) < spec_.secret_sites &&
        coin(45)) {
      auto name = fresh_name("s");
      slots_.push_back({name, lab, payload_ty});
      return mk_var(name);
    }
    if (depth > 0 && coin(25)) return mk_label_op(value(payload_ty, depth - 1));
    return mk_labeled_val(closed_value(payload_ty, raw()));
  }

  TermPtr ref_of(const Label& lh, const TermPtr& ty) {
    if (coin(50))
      if (auto v = var_of(mk_ref_t(mk_label_lit(lh), ty))) return *v;
    auto& seg = store_.segment(lh);
    seg.cells.push_back({closed_value(ty, raw()), ty});
    return mk_ref_val(mk_label_lit(lh), seg.cells.size() - 1);
  }

  TermPtr value(const TermPtr& ty, int depth) {
    switch (ty->tag) {
      case Tag::IntT: {
        if (depth > 0 && coin(35))
          return mk_app(mk_app(mk_prim(Prim::Add), value(ty, depth - 1)),
                        value(ty, depth - 1));
        if (depth > 0 && coin(20))
          return mk_if(value(mk_bool_t(), 0), value(ty, depth - 1),
                       value(ty, depth - 1));
        if (coin(25))
          if (auto v = var_of(ty)) return *v;
        return mk_int(pick(100));
      }
      case Tag::BoolT:
        if (coin(25))
          if (auto v = var_of(ty)) return *v;
        return mk_bool(pick(2) == 0);
      case Tag::StrT:
        if (depth > 0 && coin(30))
          return mk_app(mk_app(mk_prim(Prim::Concat), value(ty, depth - 1)),
                        value(ty, depth - 1));
        return mk_str(std::string(1, static_cast<char>('a' + pick(26))));
      case Tag::UnitT:
        return mk_unit();
      case Tag::LabelT:
        if (depth > 0 && coin(30))
          return mk_app(mk_app(mk_prim(Prim::Join), value(ty, depth - 1)),
                        value(ty, depth - 1));
        return mk_label_lit(any_label());
      case Tag::LabeledT:
        return labeled_value(ty->kids[0]->label, ty->kids[1], depth);
      case Tag::RefT:
        return ref_of(ty->kids[0]->label, ty->kids[1]);
      default:
        throw GenError("no value generator for type " + pretty(ty));
    }
  }

  // A computation of type DIO l ty.
  TermPtr comp(const Label& l, const TermPtr& ty, int depth) {
    if (depth <= 0) return mk_pure(value(ty, 0));

    // shape-directed constructors first
    if (ty->tag == Tag::LabeledT) {
      const Label& lh = ty->kids[0]->label;
      if (alg_.leq(l, lh)) {
        int r = pick(100);
        if (r < 25) return mk_plug(comp(lh, ty->kids[1], depth - 1));
        if (r < 50) return mk_read_ref(ref_of(lh, ty->kids[1]));
      }
    }
    if (ty->tag == Tag::RefT) {
      const Label& lh = ty->kids[0]->label;
      if (alg_.leq(l, lh) && coin(70)) {
        Label lm = between(l, lh);
        return mk_new_ref(ty->kids[0],
                          labeled_value(lm, ty->kids[1], depth - 1));
      }
    }
    if (ty->tag == Tag::UnitT && coin(35)) {
      Label lh = above(l);
      Label lm = between(l, lh);
      auto cell_ty = base_type();
      auto ref = ref_of(lh, cell_ty);
      return mk_write_ref(ref, labeled_value(lm, cell_ty, depth - 1));
    }

    int r = pick(100);
    if (r < 32) {  // bind
      auto s_ty = value_type(l, depth - 1);
      auto inner = comp(l, s_ty, depth - 1);
      auto name = fresh_name("x");
      vars_.emplace_back(name, s_ty);
      auto body = comp(l, ty, depth - 1);
      vars_.pop_back();
      return mk_bind(inner, mk_lambda(name, s_ty, body));
    }
    if (r < 44) {  // conditional
      return mk_if(value(mk_bool_t(), depth - 1), comp(l, ty, depth - 1),
                   comp(l, ty, depth - 1));
    }
    if (r < 54) {  // beta redex
      auto s_ty = base_type();
      auto arg = value(s_ty, depth - 1);
      auto name = fresh_name("y");
      vars_.emplace_back(name, s_ty);
      auto body = comp(l, ty, depth - 1);
      vars_.pop_back();
      return mk_app(mk_lambda(name, s_ty, body), arg);
    }
    if (r < 72 && (ty->kids.empty() || ty->tag == Tag::LabeledT)) {  // unlabel
      Label ll = below(l);
      return mk_unlabel(labeled_value(ll, ty, depth - 1));
    }
    return mk_pure(value(ty, depth - 1));
  }

  const GenSpec& spec_;
  std::mt19937_64& rng_;
  const LabelAlgebra& alg_;
  std::vector<Label> pool_;
  Store store_;
  std::vector<SecretSlot> slots_;
  std::vector<std::pair<std::string, TermPtr>> vars_;
};

Context slot_context(const LabelAlgebra& alg, const GenProgram& p,
                     const Store* store) {
  Context ctx(alg);
  if (store) ctx = ctx.with_store_typing(store);
  for (const auto& s : p.slots)
    ctx = ctx.bind(s.name, mk_labeled_t(mk_label_lit(s.label), s.type));
  return ctx;
}

}  // namespace

Generator::Generator(GenSpec spec) : spec_(spec), rng_(spec.seed) {}

GenProgram Generator::next_program() {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Builder b(spec_, rng_);
    GenProgram p;
    try {
      p = b.build();
      auto ctx = slot_context(*spec_.algebra, p, &p.store);
      (void)elaborate_against(ctx, p.term, p.type);
      p.retries = attempt;
      return p;
    } catch (const TypeError&) {
      continue;  // counted via retries on the eventual success
    }
  }
  throw GenError("generation budget exhausted; retry with a new seed");
}

Configuration fill_slots(const LabelAlgebra& alg, const GenProgram& p,
                         const std::vector<TermPtr>& fills, Store store) {
  if (fills.size() != p.slots.size())
    throw GenError("fill_slots: arity mismatch");
  auto term = p.term;
  for (std::size_t i = 0; i < p.slots.size(); ++i)
    term = subst(term, fills[i], p.slots[i].name);
  return make_config(alg, std::move(store), term, p.type);
}

Configuration Generator::close(const GenProgram& p) {
  std::vector<TermPtr> fills;
  for (const auto& s : p.slots)
    fills.push_back(mk_labeled_val(
        s.type->tag == Tag::IntT ? mk_int(static_cast<std::int64_t>(rng_() % 1000))
        : s.type->tag == Tag::BoolT ? mk_bool(rng_() % 2 == 0)
        : s.type->tag == Tag::StrT
            ? mk_str("c" + std::to_string(rng_() % 1000))
            : mk_unit()));
  auto term = p.term;
  for (std::size_t i = 0; i < p.slots.size(); ++i)
    term = subst(term, fills[i], p.slots[i].name);
  return make_config(*spec_.algebra, p.store, term, p.type);
}

std::pair<Configuration, Configuration> Generator::low_pair(
    const GenProgram& p, const Label& attacker) {
  const auto& alg = *spec_.algebra;
  std::function<TermPtr(const TermPtr&, std::uint64_t)> closed =
      [&](const TermPtr& ty, std::uint64_t k) -> TermPtr {
    switch (ty->tag) {
      case Tag::IntT: return mk_int(static_cast<std::int64_t>(k % 1000));
      case Tag::BoolT: return mk_bool(k % 2 == 0);
      case Tag::StrT: return mk_str("p" + std::to_string(k % 1000));
      case Tag::UnitT: return mk_unit();
      case Tag::LabelT: return mk_label_lit(alg.carrier_sample()[0]);
      case Tag::LabeledT: return mk_labeled_val(closed(ty->kids[1], k));
      default: return mk_int(static_cast<std::int64_t>(k));
    }
  };

  auto t1 = p.term;
  auto t2 = p.term;
  for (const auto& s : p.slots) {
    std::uint64_t k = rng_();
    auto v1 = mk_labeled_val(closed(s.type, k));
    bool secret = alg.dec_leq(s.label, attacker) == Decision::No;
    auto v2 = secret ? mk_labeled_val(closed(s.type, k + 1)) : v1;
    t1 = subst(t1, v1, s.name);
    t2 = subst(t2, v2, s.name);
  }

  Store store1 = p.store;
  Store store2 = p.store;
  std::vector<Label> secret_segments;
  for (const auto& [label, seg] : store2.segments())
    if (!seg.erased && alg.dec_leq(label, attacker) == Decision::No)
      secret_segments.push_back(label);
  for (const auto& label : secret_segments)
    for (auto& cell : store2.segment(label).cells)
      cell.value = closed(cell.type, rng_());

  auto c1 = make_config(alg, std::move(store1), t1, p.type);
  auto c2 = make_config(alg, std::move(store2), t2, p.type);
  return {std::move(c1), std::move(c2)};
}

// ---------------------------------------------------------------------------
// Random syntactic terms (round-trip fodder; not necessarily well-typed).

namespace {

class SyntaxGen {
 public:
  explicit SyntaxGen(std::mt19937_64& rng) : rng_(rng) {}

  TermPtr term(int depth) { return gen_term(depth); }

 private:
  std::mt19937_64& rng_;
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
      default: return mk_var(scope_[static_cast<std::size_t>(pick(static_cast<int>(scope_.size())))]);
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
          return mk_app(mk_app(mk_prim(Prim::Join), gen_label(0)),
                        gen_label(0));
        [[fallthrough]];
      default:
        return scope_.empty()
                   ? mk_label_lit(TwoPoint::High)
                   : mk_var(scope_[static_cast<std::size_t>(
                         pick(static_cast<int>(scope_.size())))]);
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
      case 3:
        return mk_if(gen_term(depth - 1), gen_term(depth - 1),
                     gen_term(depth - 1));
      case 4: return mk_pure(gen_term(depth - 1));
      case 5: return mk_dio_val(gen_term(depth - 1));
      case 6: return mk_labeled_val(gen_term(depth - 1));
      case 7:
        return mk_ref_val(gen_label(depth - 1),
                          pick(3) == 0 ? std::nullopt
                                       : std::optional<std::uint64_t>(
                                             static_cast<std::uint64_t>(pick(4))));
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

TermPtr syntax_term(std::mt19937_64& rng, int depth) {
  SyntaxGen g(rng);
  return g.term(depth);
}

// ---------------------------------------------------------------------------
// Checks

void CheckReport::fail(std::string why) {
  ++failures;
  if (details.size() < 5) details.push_back(std::move(why));
}

std::string CheckReport::csv() const {
  return property + "," + std::to_string(cases) + "," +
         std::to_string(failures) + "," + std::to_string(excluded);
}

std::string CheckReport::table() const {
  std::string out = property;
  out.resize(std::max<std::size_t>(out.size(), 14), ' ');
  out += " cases=" + std::to_string(cases) +
         " failures=" + std::to_string(failures) +
         " excluded=" + std::to_string(excluded);
  if (recheck_failures)
    out += " recheck-failures=" + std::to_string(recheck_failures);
  return out;
}

namespace {

std::string sim_detail(const Label& attacker, const Configuration& c,
                       const std::string& why) {
  return "attacker " + to_string(attacker) + ": " + why +
         "; configuration: " + pretty(c.raw()) + " | store " +
         store_digest(c.store);
}

// One-step simulation against a precomputed successor.
std::optional<std::string> sim_against(const Label& attacker,
                                       const Configuration& c,
                                       const Configuration& next, long fuel,
                                       long* recheck_failures) {
  Configuration ec;
  try {
    ec = erase_config(attacker, c);
  } catch (const TypeError& e) {
    if (recheck_failures) ++*recheck_failures;
    return sim_detail(attacker, c,
                      std::string("erased configuration does not re-check: ") +
                          e.what());
  }
  auto expected = erase_config_raw(attacker, next);
  long f = fuel;
  std::optional<MonadicStep> es;
  try {
    es = monadic_step(ec, f);
  } catch (const EvalError& e) {
    return sim_detail(attacker, c,
                      std::string("erased configuration cannot step: ") +
                          e.what());
  }
  if (!es)
    return sim_detail(attacker, c, "erased configuration is stuck at " +
                                       pretty(ec.raw()));
  if (!alpha_eq(es->next.raw(), expected.term))
    return sim_detail(attacker, c,
                      "step-then-erase " + pretty(expected.term) +
                          " differs from erase-then-step " +
                          pretty(es->next.raw()));
  if (!erased_store_equal(*c.algebra, attacker, es->next.store,
                          expected.store))
    return sim_detail(attacker, c,
                      "stores differ after one erased step (" +
                          store_digest(es->next.store) + " vs " +
                          store_digest(expected.store) + ")");
  return std::nullopt;
}

}  // namespace

std::optional<std::string> check_simulation(const Label& attacker,
                                            const Configuration& c,
                                            long fuel) {
  long f = fuel;
  auto s = monadic_step(c, f);
  if (!s) return std::nullopt;  // values step nowhere; nothing to simulate
  return sim_against(attacker, c, s->next, fuel, nullptr);
}

PiniResult check_pini(const Label& attacker, const Configuration& c1,
                      const Configuration& c2, long fuel) {
  if (!low_equiv(attacker, c1, c2))
    return {PiniOutcome::Fail, "inputs are not low-equivalent"};
  auto run = [&](const Configuration& c,
                 Configuration& out) -> std::optional<PiniResult> {
    long f = fuel;
    try {
      out = big_step(c, f);
      return std::nullopt;
    } catch (const EvalError& e) {
      if (e.kind == EvalErrorKind::FuelExhausted)
        return PiniResult{PiniOutcome::Excluded, "fuel exhausted"};
      return PiniResult{PiniOutcome::Fail, e.what()};
    }
  };
  Configuration f1, f2;
  if (auto r = run(c1, f1)) return *r;
  if (auto r = run(c2, f2)) return *r;
  if (!low_equiv(attacker, f1, f2))
    return {PiniOutcome::Fail,
            "final configurations distinguishable at " + to_string(attacker) +
                ": " + pretty(f1.raw()) + " | " + store_digest(f1.store) +
                "  vs  " + pretty(f2.raw()) + " | " + store_digest(f2.store)};
  return {PiniOutcome::Pass, ""};
}

std::optional<std::string> check_determinacy(const Configuration& c,
                                             long fuel) {
  long probe = fuel;
  auto rules = enumerate_monadic_rules(c, probe);
  if (rules.size() > 1) {
    std::string names;
    for (const auto& r : rules) names += r.rule + " ";
    return "more than one rule applies to " + pretty(c.raw()) + ": " + names;
  }
  long f = fuel;
  auto s = monadic_step(c, f);
  if (s.has_value() != !rules.empty())
    return "rule enumeration disagrees with the step function at " +
           pretty(c.raw());
  if (s && !alpha_eq(rules[0].term, s->next.raw()))
    return "enumerated successor differs from the step function at " +
           pretty(c.raw());
  if (s && !store_equal(rules[0].store, s->next.store))
    return "enumerated store differs from the step function at " +
           pretty(c.raw());
  return std::nullopt;
}

std::optional<std::string> check_erase_subst(const Label& attacker,
                                             const Context& ctx,
                                             const TypedTermPtr& t,
                                             const TypedTermPtr& v,
                                             const std::string& x) {
  const auto& alg = ctx.algebra();
  auto substituted = subst(t->term, v->term, x);
  TypedTermPtr st;
  try {
    st = elaborate_against(ctx, substituted, t->type);
  } catch (const TypeError& e) {
    return std::string("substituted term does not re-check: ") + e.what();
  }
  auto lhs = erase_term(alg, attacker, st);
  auto rhs = subst(erase_term(alg, attacker, t), erase_term(alg, attacker, v),
                   x);
  if (!alpha_eq(lhs, rhs))
    return "erase(t[v/x]) = " + pretty(lhs) + " but erase(t)[erase(v)/x] = " +
           pretty(rhs);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Drivers

namespace {

constexpr long kMaxTraceStates = 4096;

std::vector<Label> attacker_levels(const HarnessOptions& opts) {
  if (opts.attacker) return {*opts.attacker};
  return opts.algebra->carrier_sample();
}

GenSpec to_gen_spec(const HarnessOptions& opts) {
  GenSpec spec;
  spec.seed = opts.seed;
  spec.max_depth = opts.max_depth;
  spec.algebra = opts.algebra;
  spec.secret_sites = opts.secret_sites;
  return spec;
}

// Appends one fresh slot when generation produced none, so substitution
// cases always have a hole to work with.
GenProgram ensure_slot(GenProgram p, const LabelAlgebra& alg,
                       std::mt19937_64& rng) {
  if (!p.slots.empty()) return p;
  auto pool = alg.carrier_sample();
  const auto& lab = pool[rng() % pool.size()];
  SecretSlot slot{fresh_name("s"), lab, mk_int_t()};
  auto name = fresh_name("x");
  p.term = mk_bind(
      mk_pure(mk_var(slot.name)),
      mk_lambda(name, mk_labeled_t(mk_label_lit(slot.label), slot.type),
                p.term));
  p.slots.push_back(std::move(slot));
  return p;
}

}  // namespace

CheckReport run_property(const std::string& property,
                         const HarnessOptions& opts) {
  CheckReport report;
  report.property = property;
  Generator gen(to_gen_spec(opts));
  auto attackers = attacker_levels(opts);

  if (property == "roundtrip") {
    std::mt19937_64 rng(opts.seed);
    const LabelAlgebra& tp = two_point_algebra();
    for (long i = 0; i < opts.count; ++i) {
      ++report.cases;
      auto t = syntax_term(rng, 1 + static_cast<int>(i % opts.max_depth));
      auto printed = pretty(t);
      try {
        auto back = parse_term(printed, tp);
        if (!alpha_eq(back, t))
          report.fail("round trip changed the term: " + printed);
      } catch (const ParseError& e) {
        report.fail("printed form does not parse: " + printed + " (" +
                    e.what() + ")");
      }
    }
    return report;
  }

  if (property == "erase-subst") {
    for (long i = 0; i < opts.count; ++i) {
      auto p = ensure_slot(gen.next_program(), *opts.algebra, gen.rng());
      Context ctx = slot_context(*opts.algebra, p, &p.store);
      TypedTermPtr t_tt;
      try {
        t_tt = elaborate_against(ctx, p.term, p.type);
      } catch (const TypeError& e) {
        ++report.cases;
        report.fail(std::string("template does not elaborate: ") + e.what());
        continue;
      }
      const auto& slot = p.slots[gen.rng()() % p.slots.size()];
      auto slot_ty = mk_labeled_t(mk_label_lit(slot.label), slot.type);
      auto v_tt = elaborate_against(
          ctx, mk_labeled_val(mk_int(static_cast<std::int64_t>(gen.rng()() % 1000))),
          slot_ty);
      for (const auto& attacker : attackers) {
        ++report.cases;
        if (auto why = check_erase_subst(attacker, ctx, t_tt, v_tt, slot.name))
          report.fail("attacker " + to_string(attacker) + ": " + *why);
      }
    }
    return report;
  }

  if (property == "pini") {
    for (long i = 0; i < opts.count; ++i) {
      auto p = gen.next_program();
      for (const auto& attacker : attackers) {
        ++report.cases;
        auto [c1, c2] = gen.low_pair(p, attacker);
        auto r = check_pini(attacker, c1, c2, opts.fuel);
        switch (r.outcome) {
          case PiniOutcome::Pass: break;
          case PiniOutcome::Excluded: ++report.excluded; break;
          case PiniOutcome::Fail:
            report.fail("attacker " + to_string(attacker) + ": " + r.detail +
                        "; program " + pretty(p.term));
            break;
        }
      }
    }
    return report;
  }

  if (property == "simulation" || property == "determinacy" ||
      property == "preservation") {
    for (long i = 0; i < opts.count; ++i) {
      auto p = gen.next_program();
      ++report.cases;
      Configuration c;
      try {
        c = gen.close(p);
      } catch (const TypeError& e) {
        report.fail(std::string("closed program does not elaborate: ") +
                    e.what());
        continue;
      }
      long fuel = opts.fuel;
      bool case_failed = false;
      for (long state = 0; state < kMaxTraceStates; ++state) {
        if (property == "determinacy") {
          if (auto why = check_determinacy(c, opts.fuel)) {
            report.fail(*why);
            case_failed = true;
          }
        }
        std::optional<MonadicStep> s;
        try {
          s = monadic_step(c, fuel);
        } catch (const EvalError& e) {
          if (e.kind == EvalErrorKind::FuelExhausted) {
            ++report.excluded;
          } else if (property == "preservation" &&
                     e.kind == EvalErrorKind::Preservation) {
            report.fail(e.what());
          } else if (property != "preservation") {
            report.fail(std::string("evaluation error: ") + e.what());
          }
          break;
        }
        if (!s) break;
        if (property == "simulation") {
          for (const auto& attacker : attackers) {
            if (auto why = sim_against(attacker, c, s->next, opts.fuel,
                                       &report.recheck_failures)) {
              report.fail(*why);
              case_failed = true;
            }
          }
        }
        c = std::move(s->next);
        if (case_failed) break;
      }
    }
    return report;
  }

  throw std::invalid_argument("unknown property '" + property + "'");
}

RuleCoverage run_coverage(const HarnessOptions& opts) {
  RuleCoverage cov;
  Generator gen(to_gen_spec(opts));
  const char* names[] = {"Bind2", "Plug", "New2", "Write3", "Read2"};
  for (long i = 0; i < opts.count; ++i) {
    auto p = gen.next_program();
    Configuration c = gen.close(p);
    long fuel = opts.fuel;
    std::vector<std::string> trace;
    try {
      (void)big_step(std::move(c), fuel, &trace);
    } catch (const EvalError&) {
      continue;  // fuel or stuck: not counted
    }
    ++cov.traces;
    for (const char* name : names) {
      bool seen = false;
      for (const auto& line : trace)
        if (line.find(name) != std::string::npos) {
          seen = true;
          break;
        }
      if (seen) ++cov.traces_with_rule[name];
    }
  }
  return cov;
}

}  // namespace ttsec
