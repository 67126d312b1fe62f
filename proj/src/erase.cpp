#include "ttsec/erase.hpp"

#include "ttsec/pretty.hpp"

namespace ttsec {

namespace {

class Eraser {
 public:
  Eraser(const LabelAlgebra& alg, const Label& attacker)
      : alg_(alg), attacker_(attacker) {}

  // Label of a normalized label term; erasure only runs on configurations,
  // where every label annotation has been resolved to a literal.
  Label lit(const TermPtr& l) const {
    auto c = closed_label(l);
    if (!c)
      throw EraseError("label " + pretty(l) +
                       " is not closed; erasure needs literal labels");
    return *c;
  }

  bool secret(const TermPtr& label_term) const {
    return alg_.dec_leq(lit(label_term), attacker_) == Decision::No;
  }

  // The node's computation label when its type is DIO l tau.
  bool secret_dio(const TypedTermPtr& t) const {
    auto dio = split_dio(t->type);
    return dio && secret(dio->first);
  }

  TermPtr kid(const TypedTermPtr& t, std::size_t i) {
    return run(t->kids[i]);
  }

  TermPtr run(const TypedTermPtr& t) {
    const TermPtr& term = t->term;
    switch (term->tag) {
      // constants, variables and primitive types are unaffected
      case Tag::IntLit:
      case Tag::BoolLit:
      case Tag::UnitLit:
      case Tag::StrLit:
      case Tag::LabelLit:
      case Tag::Prim:
      case Tag::Var:
      case Tag::TypeU:
      case Tag::IntT:
      case Tag::BoolT:
      case Tag::UnitT:
      case Tag::StrT:
      case Tag::LabelT:
      case Tag::Hole:
        return term;

      case Tag::Lambda:
        return mk_lambda(term->text, kid(t, 0), kid(t, 1));
      case Tag::Forall:
        return mk_forall(term->text, kid(t, 0), kid(t, 1));

      // computations collapse when their own label is secret
      case Tag::App:
        if (secret_dio(t)) return mk_hole();
        return mk_app(kid(t, 0), kid(t, 1));
      case Tag::If:
        if (secret_dio(t)) return mk_hole();
        return mk_if(kid(t, 0), kid(t, 1), kid(t, 2));
      case Tag::Pure:
        if (secret_dio(t)) return mk_hole();
        return mk_pure(kid(t, 0));
      case Tag::DioVal:
        if (secret_dio(t)) return mk_hole();
        return mk_dio_val(kid(t, 0));
      case Tag::Bind:
        if (secret_dio(t)) return mk_hole();
        return mk_bind(kid(t, 0), kid(t, 1));
      case Tag::Unlabel:
        if (secret_dio(t)) return mk_hole();
        return mk_unlabel(kid(t, 0));
      case Tag::NewRef:
        if (secret_dio(t)) return mk_hole();
        return mk_new_ref(kid(t, 0), kid(t, 1));
      case Tag::WriteRef:
        if (secret_dio(t)) return mk_hole();
        return mk_write_ref(kid(t, 0), kid(t, 1));

      // labeled data keeps its shape; the payload is blanked when secret
      case Tag::LabeledVal:
      case Tag::LabelOp: {
        if (t->type->tag != Tag::LabeledT)
          throw EraseError("labeled value with non-labeled type " +
                           pretty(t->type));
        bool hide = secret(t->type->kids[0]);
        auto payload = hide ? mk_hole() : kid(t, 0);
        return term->tag == Tag::LabeledVal ? mk_labeled_val(payload)
                                            : mk_label_op(payload);
      }

      case Tag::RefVal: {
        if (t->type->tag != Tag::RefT)
          throw EraseError("reference with non-reference type " +
                           pretty(t->type));
        bool hide = secret(t->type->kids[0]);
        return mk_ref_val(kid(t, 0),
                          hide ? std::nullopt : term->ref_index);
      }

      case Tag::ReadRef:
        if (secret_dio(t)) return mk_hole();
        // a secret cell label shows up as the argument's erased index
        return mk_read_ref(kid(t, 0));

      case Tag::Plug:
      case Tag::PlugHole: {
        if (secret_dio(t)) return mk_hole();
        auto dio = split_dio(t->type);
        bool inner_secret = dio && dio->second->tag == Tag::LabeledT &&
                            secret(dio->second->kids[0]);
        auto payload = kid(t, 0);
        if (term->tag == Tag::PlugHole || inner_secret)
          return mk_plug_hole(payload);
        return mk_plug(payload);
      }

      // types erase homomorphically
      case Tag::DioT:
        return mk_dio_t(kid(t, 0), kid(t, 1));
      case Tag::LabeledT:
        return mk_labeled_t(kid(t, 0), kid(t, 1));
      case Tag::RefT:
        return mk_ref_t(kid(t, 0), kid(t, 1));

      case Tag::Ascribe:
        break;  // stripped by elaboration; nothing to erase
    }
    throw EraseError("unexpected node " + std::string(head_name(term->tag)));
  }

 private:
  const LabelAlgebra& alg_;
  const Label& attacker_;
};

// Homomorphic erasure of a normalized type given as a raw term. Labels and
// primitive types are unaffected; embedded computations are not supported
// in type position.
TermPtr erase_type(const LabelAlgebra& alg, const Label& attacker,
                   const TermPtr& ty) {
  switch (ty->tag) {
    case Tag::Pure:
    case Tag::DioVal:
    case Tag::Bind:
    case Tag::Unlabel:
    case Tag::Plug:
    case Tag::PlugHole:
    case Tag::NewRef:
    case Tag::ReadRef:
    case Tag::WriteRef:
    case Tag::LabeledVal:
    case Tag::RefVal:
      throw EraseError("computation embedded in type position: " + pretty(ty));
    default:
      break;
  }
  if (ty->kids.empty()) return ty;
  auto copy = std::make_shared<Term>(*ty);
  for (auto& k : copy->kids) k = erase_type(alg, attacker, k);
  return copy;
}

void collect_labels(const TermPtr& t, std::vector<Label>& out) {
  if (t->tag == Tag::LabelLit) out.push_back(t->label);
  for (const auto& k : t->kids) collect_labels(k, out);
}

}  // namespace

TermPtr erase_term(const LabelAlgebra& alg, const Label& attacker,
                   const TypedTermPtr& t) {
  return Eraser(alg, attacker).run(t);
}

Store erase_store(const LabelAlgebra& alg, const Label& attacker,
                  const Store& s) {
  Store out;
  Context ctx = Context(alg).with_store_typing(&s);
  for (const auto& [label, seg] : s.segments()) {
    auto& target = out.segment(label);
    if (seg.erased || alg.dec_leq(label, attacker) == Decision::No) {
      target.erased = true;
      continue;
    }
    for (const auto& cell : seg.cells) {
      auto typed = elaborate_against(ctx, cell.value, cell.type);
      target.cells.push_back({erase_term(alg, attacker, typed),
                              erase_type(alg, attacker, cell.type)});
    }
  }
  return out;
}

ErasedConfig erase_config_raw(const Label& attacker, const Configuration& c) {
  const auto& alg = *c.algebra;
  ErasedConfig out;
  out.store = erase_store(alg, attacker, c.store);
  out.type = erase_type(alg, attacker, c.type());
  auto dio = split_dio(c.type());
  if (!dio)
    throw EraseError("configuration term is not a computation: " +
                     pretty(c.type()));
  auto l = closed_label(dio->first);
  if (!l) throw EraseError("open computation label " + pretty(dio->first));
  if (alg.dec_leq(*l, attacker) == Decision::No)
    out.term = mk_hole();
  else
    out.term = erase_term(alg, attacker, c.term);

  // materialize the erased segments the configuration can reach
  std::vector<Label> mentioned;
  collect_labels(c.raw(), mentioned);
  collect_labels(c.type(), mentioned);
  for (const auto& [label, seg] : c.store.segments()) {
    mentioned.push_back(label);
    for (const auto& cell : seg.cells) {
      collect_labels(cell.value, mentioned);
      collect_labels(cell.type, mentioned);
    }
  }
  for (const auto& label : mentioned)
    if (alg.contains(label) && alg.dec_leq(label, attacker) == Decision::No)
      out.store.segment(label).erased = true;
  return out;
}

Configuration erase_config(const Label& attacker, const Configuration& c,
                           long check_fuel) {
  auto raw = erase_config_raw(attacker, c);
  return make_config(*c.algebra, std::move(raw.store), raw.term, raw.type,
                     check_fuel);
}

bool erased_store_equal(const LabelAlgebra& alg, const Label& attacker,
                        const Store& a, const Store& b) {
  auto one_way = [&](const Store& x, const Store& y) {
    for (const auto& [label, seg] : x.segments()) {
      bool secret = alg.dec_leq(label, attacker) == Decision::No;
      const auto* other = y.find(label);
      if (!other) {
        // missing segments denote •, or the empty list, depending on level
        if (secret ? !seg.erased : (seg.erased || !seg.cells.empty()))
          return false;
        continue;
      }
      if (secret) {
        if (!seg.erased || !other->erased) return false;
        continue;
      }
      if (seg.erased != other->erased) return false;
      if (seg.cells.size() != other->cells.size()) return false;
      for (std::size_t i = 0; i < seg.cells.size(); ++i)
        if (!alpha_eq(seg.cells[i].value, other->cells[i].value)) return false;
    }
    return true;
  };
  return one_way(a, b) && one_way(b, a);
}

bool low_equiv(const Label& attacker, const Configuration& c1,
               const Configuration& c2) {
  auto e1 = erase_config_raw(attacker, c1);
  auto e2 = erase_config_raw(attacker, c2);
  return alpha_eq(e1.term, e2.term) &&
         erased_store_equal(*c1.algebra, attacker, e1.store, e2.store);
}

}  // namespace ttsec
