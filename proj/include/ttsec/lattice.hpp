#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ttsec {

// Index component of compartment labels: Bot < Nat n < Top, and two
// distinct naturals only meet again at Top.
struct Id {
  enum class Kind : std::uint8_t { Bot, Nat, Top };
  Kind kind = Kind::Bot;
  std::uint64_t n = 0;  // meaningful only when kind == Nat

  static Id bot() { return {Kind::Bot, 0}; }
  static Id top() { return {Kind::Top, 0}; }
  static Id nat(std::uint64_t v) { return {Kind::Nat, v}; }

  friend bool operator==(const Id&, const Id&) = default;
  friend auto operator<=>(const Id&, const Id&) = default;
};

Id join(const Id& a, const Id& b);
bool leq(const Id& a, const Id& b);
std::string to_string(const Id& id);

// The two-point lattice, Low below High.
enum class TwoPoint : std::uint8_t { Low, High };

// Conference-manager compartments: a registered user U(uid), an author
// A(uid, sid) of a submission, and a PC member PC(uid, sid) reviewing it.
struct Compartment {
  enum class Kind : std::uint8_t { User, Author, Pc };
  Kind kind = Kind::User;
  Id uid{};
  Id sid{};  // ignored for User

  static Compartment user(Id u) { return {Kind::User, u, Id::bot()}; }
  static Compartment author(Id u, Id s) { return {Kind::Author, u, s}; }
  static Compartment pc(Id u, Id s) { return {Kind::Pc, u, s}; }

  friend bool operator==(const Compartment&, const Compartment&) = default;
  friend auto operator<=>(const Compartment&, const Compartment&) = default;
};

// A label is an element of one of the registered algebras. Structural
// equality; the variant tag doubles as the carrier check.
using Label = std::variant<TwoPoint, Compartment>;

std::string to_string(const Label& l);

enum class Decision : std::uint8_t { Yes, No };

struct LatticeError : std::runtime_error {
  explicit LatticeError(const std::string& what) : std::runtime_error(what) {}
};

// A pluggable security-label algebra. join induces the order:
// a ⊑ b iff join(a, b) == b. Algebras are stateless; all operations are
// referentially transparent and safe to call from any thread.
class LabelAlgebra {
 public:
  virtual ~LabelAlgebra() = default;

  virtual std::string_view name() const = 0;
  virtual bool contains(const Label& l) const = 0;
  virtual Label join(const Label& a, const Label& b) const = 0;
  virtual std::optional<Label> bottom_opt() const = 0;

  // Finite sample of the carrier used for exhaustive law checks and for
  // enumerating attacker levels.
  virtual std::vector<Label> carrier_sample() const = 0;

  // x `join` y == y
  bool leq(const Label& a, const Label& b) const;
  Decision dec_leq(const Label& a, const Label& b) const;

  // Least element; throws LatticeError for unbounded algebras.
  Label bottom() const;

 protected:
  void require_member(const Label& l, const char* op) const;
};

const LabelAlgebra& two_point_algebra();
const LabelAlgebra& compartment_algebra();

// nullptr when no algebra goes by that name.
const LabelAlgebra* find_algebra(std::string_view name);

// Compartment labels over Id in {Bot, Nat 0 .. Nat max_nat, Top}.
std::vector<Label> compartment_carrier(std::uint64_t max_nat);

}  // namespace ttsec
