#include "ttsec/step.hpp"

namespace ttsec {

namespace {

TermPtr replace_kid(const TermPtr& t, std::size_t i, TermPtr nk) {
  auto copy = std::make_shared<Term>(*t);
  copy->kids[i] = std::move(nk);
  return copy;
}

// δ-reduction of a saturated primitive application, if the spine is
// App(App(prim, v1), v2) with literals of the right shape.
std::optional<TermPtr> delta(const TermPtr& t, const LabelAlgebra& alg) {
  if (t->tag != Tag::App) return std::nullopt;
  const auto& inner = t->kids[0];
  if (inner->tag != Tag::App || inner->kids[0]->tag != Tag::Prim)
    return std::nullopt;
  const auto& a = inner->kids[1];
  const auto& b = t->kids[1];
  switch (inner->kids[0]->prim) {
    case Prim::Add:
      if (a->tag == Tag::IntLit && b->tag == Tag::IntLit)
        return mk_int(a->int_val + b->int_val);
      return std::nullopt;
    case Prim::Concat:
      if (a->tag == Tag::StrLit && b->tag == Tag::StrLit)
        return mk_str(a->text + b->text);
      return std::nullopt;
    case Prim::Join:
      if (a->tag == Tag::LabelLit && b->tag == Tag::LabelLit)
        return mk_label_lit(alg.join(a->label, b->label));
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

std::optional<PureStep> pure_step(const TermPtr& t, const LabelAlgebra& alg) {
  auto step_kid = [&](std::size_t i,
                      const char* rule) -> std::optional<PureStep> {
    if (auto s = pure_step(t->kids[i], alg))
      return PureStep{replace_kid(t, i, s->next), rule};
    return std::nullopt;
  };

  switch (t->tag) {
    case Tag::App: {
      if (auto s = step_kid(0, "App1")) return s;
      if (auto s = step_kid(1, "App2")) return s;
      const auto& fn = t->kids[0];
      if (fn->tag == Tag::Lambda)
        return PureStep{subst(fn->kids[1], t->kids[1], fn->text), "Beta"};
      if (auto d = delta(t, alg)) return PureStep{*d, "Delta"};
      return std::nullopt;
    }
    case Tag::If: {
      if (auto s = step_kid(0, "If1")) return s;
      const auto& c = t->kids[0];
      if (c->tag == Tag::BoolLit)
        return c->bool_val ? PureStep{t->kids[1], "If2"}
                           : PureStep{t->kids[2], "If3"};
      return std::nullopt;
    }
    case Tag::Bind:
      if (t->kids[0]->tag == Tag::DioVal)
        return PureStep{mk_app(t->kids[1], t->kids[0]->kids[0]), "Bind1"};
      return std::nullopt;
    case Tag::Pure:
      if (auto s = step_kid(0, "Pure1")) return s;
      return PureStep{mk_dio_val(t->kids[0]), "Pure2"};
    case Tag::LabelOp:
      if (auto s = step_kid(0, "Label1")) return s;
      return PureStep{mk_labeled_val(t->kids[0]), "Label2"};
    case Tag::Unlabel: {
      if (auto s = step_kid(0, "Unlabel1")) return s;
      const auto& l = t->kids[0];
      if (l->tag == Tag::LabeledVal && is_value(l->kids[0], alg))
        return PureStep{mk_pure(l->kids[0]), "Unlabel2"};
      return std::nullopt;
    }
    case Tag::NewRef:
      return step_kid(1, "New1");
    case Tag::WriteRef: {
      if (auto s = step_kid(0, "Write1")) return s;
      if (is_value(t->kids[0], alg))
        if (auto s = step_kid(1, "Write2")) return s;
      return std::nullopt;
    }
    case Tag::ReadRef:
      return step_kid(0, "Read1");
    case Tag::DioT: {
      if (auto s = step_kid(0, "DIO1")) return s;
      return step_kid(1, "DIO2");
    }
    case Tag::LabeledT: {
      if (auto s = step_kid(0, "Labeled1")) return s;
      return step_kid(1, "Labeled2");
    }
    case Tag::RefT: {
      if (auto s = step_kid(0, "Ref1")) return s;
      return step_kid(1, "Ref2");
    }
    case Tag::Forall: {
      if (auto s = step_kid(0, "Forall1")) return s;
      return step_kid(1, "Forall2");
    }
    case Tag::Hole:
      return PureStep{t, "Hole"};
    case Tag::PlugHole:
      return PureStep{mk_pure(mk_labeled_val(mk_hole())), "PlugHole"};
    case Tag::Ascribe:
      return PureStep{t->kids[0], "Ascribe"};
    default:
      return std::nullopt;
  }
}

bool is_value(const TermPtr& t, const LabelAlgebra& alg) {
  return !pure_step(t, alg).has_value();
}

std::vector<PureStep> enumerate_pure_steps(const TermPtr& t,
                                           const LabelAlgebra& alg) {
  std::vector<PureStep> out;
  auto kid_entries = [&](std::size_t i, const char* rule, bool enabled) {
    if (!enabled) return;
    for (const auto& s : enumerate_pure_steps(t->kids[i], alg))
      out.push_back({replace_kid(t, i, s.next), rule});
  };

  switch (t->tag) {
    case Tag::App: {
      kid_entries(0, "App1", true);
      kid_entries(1, "App2", is_value(t->kids[0], alg));
      if (t->kids[0]->tag == Tag::Lambda && is_value(t->kids[1], alg))
        out.push_back(
            {subst(t->kids[0]->kids[1], t->kids[1], t->kids[0]->text), "Beta"});
      if (is_value(t->kids[0], alg) && is_value(t->kids[1], alg))
        if (auto d = delta(t, alg)) out.push_back({*d, "Delta"});
      break;
    }
    case Tag::If: {
      kid_entries(0, "If1", true);
      const auto& c = t->kids[0];
      if (c->tag == Tag::BoolLit) {
        if (c->bool_val) out.push_back({t->kids[1], "If2"});
        else out.push_back({t->kids[2], "If3"});
      }
      break;
    }
    case Tag::Bind:
      if (t->kids[0]->tag == Tag::DioVal)
        out.push_back({mk_app(t->kids[1], t->kids[0]->kids[0]), "Bind1"});
      break;
    case Tag::Pure:
      kid_entries(0, "Pure1", true);
      if (is_value(t->kids[0], alg))
        out.push_back({mk_dio_val(t->kids[0]), "Pure2"});
      break;
    case Tag::LabelOp:
      kid_entries(0, "Label1", true);
      if (is_value(t->kids[0], alg))
        out.push_back({mk_labeled_val(t->kids[0]), "Label2"});
      break;
    case Tag::Unlabel:
      kid_entries(0, "Unlabel1", true);
      if (t->kids[0]->tag == Tag::LabeledVal &&
          is_value(t->kids[0]->kids[0], alg))
        out.push_back({mk_pure(t->kids[0]->kids[0]), "Unlabel2"});
      break;
    case Tag::NewRef:
      kid_entries(1, "New1", true);
      break;
    case Tag::WriteRef:
      kid_entries(0, "Write1", true);
      kid_entries(1, "Write2", is_value(t->kids[0], alg));
      break;
    case Tag::ReadRef:
      kid_entries(0, "Read1", true);
      break;
    case Tag::DioT:
      kid_entries(0, "DIO1", true);
      kid_entries(1, "DIO2", is_value(t->kids[0], alg));
      break;
    case Tag::LabeledT:
      kid_entries(0, "Labeled1", true);
      kid_entries(1, "Labeled2", is_value(t->kids[0], alg));
      break;
    case Tag::RefT:
      kid_entries(0, "Ref1", true);
      kid_entries(1, "Ref2", is_value(t->kids[0], alg));
      break;
    case Tag::Forall:
      kid_entries(0, "Forall1", true);
      kid_entries(1, "Forall2", is_value(t->kids[0], alg));
      break;
    case Tag::Hole:
      out.push_back({t, "Hole"});
      break;
    case Tag::PlugHole:
      out.push_back({mk_pure(mk_labeled_val(mk_hole())), "PlugHole"});
      break;
    case Tag::Ascribe:
      out.push_back({t->kids[0], "Ascribe"});
      break;
    default:
      break;
  }
  return out;
}

}  // namespace ttsec
