#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ttsec/lattice.hpp"

namespace ttsec {

// Node kinds of the abstract syntax. Type constructors are ordinary terms;
// DioVal / LabeledVal / RefVal are the run-time values produced by pure,
// label and newRef; Hole and PlugHole are the erased forms.
enum class Tag : std::uint8_t {
  // constants
  IntLit,
  BoolLit,
  UnitLit,
  StrLit,
  LabelLit,
  Prim,
  // core calculus
  Var,
  Lambda,
  Forall,
  App,
  If,
  // type constructors
  TypeU,
  IntT,
  BoolT,
  UnitT,
  StrT,
  LabelT,
  DioT,
  LabeledT,
  RefT,
  // security terms
  Pure,
  DioVal,
  LabeledVal,
  RefVal,
  Bind,
  LabelOp,
  Unlabel,
  Plug,
  NewRef,
  ReadRef,
  WriteRef,
  // erased forms
  Hole,
  PlugHole,
  // parse-time ascription (t : T); stripped by elaboration
  Ascribe,
};

enum class Prim : std::uint8_t { Add, Concat, Join };

struct SrcLoc {
  int line = 0;  // 0 = unknown
  int col = 0;
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Immutable term tree. Child layout per tag:
//   Lambda/Forall   {annotation, body}, binder name in `text`
//   App             {fn, arg}
//   If              {cond, then, else}
//   DioT/LabeledT/RefT {label, type}
//   Pure/DioVal/LabeledVal/LabelOp/Unlabel/Plug/ReadRef/PlugHole {t}
//   Bind/WriteRef   {t1, t2}
//   NewRef          {label, t}
//   RefVal          {label}, index in `ref_index` (nullopt = erased)
//   Ascribe         {t, type}
struct Term {
  Tag tag;
  std::int64_t int_val = 0;
  bool bool_val = false;
  std::string text;  // StrLit contents, Var name, binder name
  Prim prim = Prim::Add;
  Label label{TwoPoint::Low};
  std::optional<std::uint64_t> ref_index;
  std::vector<TermPtr> kids;
  SrcLoc loc{};
};

// Factories.
TermPtr mk_int(std::int64_t v);
TermPtr mk_bool(bool v);
TermPtr mk_unit();
TermPtr mk_str(std::string s);
TermPtr mk_label_lit(Label l);
TermPtr mk_prim(Prim p);
TermPtr mk_var(std::string name);
TermPtr mk_lambda(std::string x, TermPtr ann, TermPtr body);
TermPtr mk_forall(std::string x, TermPtr ann, TermPtr body);
TermPtr mk_app(TermPtr fn, TermPtr arg);
TermPtr mk_if(TermPtr c, TermPtr t, TermPtr e);
TermPtr mk_type();
TermPtr mk_int_t();
TermPtr mk_bool_t();
TermPtr mk_unit_t();
TermPtr mk_str_t();
TermPtr mk_label_t();
TermPtr mk_dio_t(TermPtr label, TermPtr ty);
TermPtr mk_labeled_t(TermPtr label, TermPtr ty);
TermPtr mk_ref_t(TermPtr label, TermPtr ty);
TermPtr mk_pure(TermPtr t);
TermPtr mk_dio_val(TermPtr t);
TermPtr mk_labeled_val(TermPtr t);
TermPtr mk_ref_val(TermPtr label, std::optional<std::uint64_t> index);
TermPtr mk_bind(TermPtr t1, TermPtr t2);
TermPtr mk_label_op(TermPtr t);
TermPtr mk_unlabel(TermPtr t);
TermPtr mk_plug(TermPtr t);
TermPtr mk_new_ref(TermPtr label, TermPtr t);
TermPtr mk_read_ref(TermPtr t);
TermPtr mk_write_ref(TermPtr t1, TermPtr t2);
TermPtr mk_hole();
TermPtr mk_plug_hole(TermPtr t);
TermPtr mk_ascribe(TermPtr t, TermPtr ty);

TermPtr with_loc(TermPtr t, SrcLoc loc);

// Fresh variable name based on `hint` (hint alone carries the display name;
// the suffix only guarantees uniqueness).
std::string fresh_name(const std::string& hint);
// Display name for a possibly freshened variable.
std::string name_hint(const std::string& name);

bool is_binder(Tag tag);

// Equality up to consistent renaming of bound variables.
bool alpha_eq(const TermPtr& a, const TermPtr& b);

// Capture-avoiding substitution of v for free occurrences of x in t.
TermPtr subst(const TermPtr& t, const TermPtr& v, const std::string& x);

std::set<std::string> free_vars(const TermPtr& t);

// Short head name for traces and diagnostics, e.g. "bind", "pure", "if".
std::string_view head_name(Tag tag);

std::string_view prim_name(Prim p);

}  // namespace ttsec
