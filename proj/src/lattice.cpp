#include "ttsec/lattice.hpp"

namespace ttsec {

Id join(const Id& a, const Id& b) {
  if (a.kind == Id::Kind::Bot) return b;
  if (b.kind == Id::Kind::Bot) return a;
  if (a.kind == Id::Kind::Top || b.kind == Id::Kind::Top) return Id::top();
  return a.n == b.n ? a : Id::top();
}

bool leq(const Id& a, const Id& b) { return join(a, b) == b; }

std::string to_string(const Id& id) {
  switch (id.kind) {
    case Id::Kind::Bot: return "bot";
    case Id::Kind::Top: return "top";
    case Id::Kind::Nat: return std::to_string(id.n);
  }
  return "?";
}

std::string to_string(const Label& l) {
  if (const auto* tp = std::get_if<TwoPoint>(&l))
    return *tp == TwoPoint::Low ? "L" : "H";
  const auto& c = std::get<Compartment>(l);
  switch (c.kind) {
    case Compartment::Kind::User: return "U(" + to_string(c.uid) + ")";
    case Compartment::Kind::Author:
      return "A(" + to_string(c.uid) + "," + to_string(c.sid) + ")";
    case Compartment::Kind::Pc:
      return "PC(" + to_string(c.uid) + "," + to_string(c.sid) + ")";
  }
  return "?";
}

void LabelAlgebra::require_member(const Label& l, const char* op) const {
  if (!contains(l))
    throw LatticeError(std::string(op) + ": label " + to_string(l) +
                       " is not an element of the " + std::string(name()) +
                       " lattice");
}

bool LabelAlgebra::leq(const Label& a, const Label& b) const {
  return join(a, b) == b;
}

Decision LabelAlgebra::dec_leq(const Label& a, const Label& b) const {
  return leq(a, b) ? Decision::Yes : Decision::No;
}

Label LabelAlgebra::bottom() const {
  auto b = bottom_opt();
  if (!b)
    throw LatticeError("bottom: the " + std::string(name()) +
                       " lattice has no least element");
  return *b;
}

namespace {

class TwoPointAlgebra final : public LabelAlgebra {
 public:
  std::string_view name() const override { return "two_point"; }

  bool contains(const Label& l) const override {
    return std::holds_alternative<TwoPoint>(l);
  }

  Label join(const Label& a, const Label& b) const override {
    require_member(a, "join");
    require_member(b, "join");
    auto x = std::get<TwoPoint>(a), y = std::get<TwoPoint>(b);
    return (x == TwoPoint::High || y == TwoPoint::High) ? TwoPoint::High
                                                        : TwoPoint::Low;
  }

  std::optional<Label> bottom_opt() const override { return Label{TwoPoint::Low}; }

  std::vector<Label> carrier_sample() const override {
    return {Label{TwoPoint::Low}, Label{TwoPoint::High}};
  }
};

// Componentwise join on compartments. U carries no submission index, so in
// mixed joins it contributes only its user index; joining anything into a
// PC compartment keeps the PC's user index, since authors flow to every
// reviewer of the same submission.
Compartment join_comp(const Compartment& a, const Compartment& b) {
  using K = Compartment::Kind;
  if (a.kind == b.kind) {
    switch (a.kind) {
      case K::User: return Compartment::user(join(a.uid, b.uid));
      case K::Author: return Compartment::author(join(a.uid, b.uid), join(a.sid, b.sid));
      case K::Pc: return Compartment::pc(join(a.uid, b.uid), join(a.sid, b.sid));
    }
  }
  if (a.kind > b.kind) return join_comp(b, a);
  if (a.kind == K::User && b.kind == K::Author)
    return Compartment::author(join(a.uid, b.uid), b.sid);
  if (a.kind == K::User && b.kind == K::Pc)
    return Compartment::pc(b.uid, b.sid);
  // Author ⊔ Pc
  return Compartment::pc(b.uid, join(a.sid, b.sid));
}

class CompartmentAlgebra final : public LabelAlgebra {
 public:
  std::string_view name() const override { return "compartment"; }

  bool contains(const Label& l) const override {
    return std::holds_alternative<Compartment>(l);
  }

  Label join(const Label& a, const Label& b) const override {
    require_member(a, "join");
    require_member(b, "join");
    return join_comp(std::get<Compartment>(a), std::get<Compartment>(b));
  }

  std::optional<Label> bottom_opt() const override {
    return Label{Compartment::user(Id::bot())};
  }

  std::vector<Label> carrier_sample() const override {
    return compartment_carrier(2);
  }
};

const TwoPointAlgebra kTwoPoint;
const CompartmentAlgebra kCompartment;

}  // namespace

const LabelAlgebra& two_point_algebra() { return kTwoPoint; }
const LabelAlgebra& compartment_algebra() { return kCompartment; }

const LabelAlgebra* find_algebra(std::string_view name) {
  if (name == "two_point") return &kTwoPoint;
  if (name == "compartment") return &kCompartment;
  return nullptr;
}

std::vector<Label> compartment_carrier(std::uint64_t max_nat) {
  std::vector<Id> ids;
  ids.push_back(Id::bot());
  for (std::uint64_t i = 0; i <= max_nat; ++i) ids.push_back(Id::nat(i));
  ids.push_back(Id::top());

  std::vector<Label> out;
  for (const auto& u : ids) out.push_back(Compartment::user(u));
  for (const auto& u : ids)
    for (const auto& s : ids) out.push_back(Compartment::author(u, s));
  for (const auto& u : ids)
    for (const auto& s : ids) out.push_back(Compartment::pc(u, s));
  return out;
}

}  // namespace ttsec
