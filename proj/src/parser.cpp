#include "ttsec/parser.hpp"

#include <cctype>
#include <map>
#include <unordered_set>

namespace ttsec {

namespace {

enum class Tok : std::uint8_t {
  Ident, Int, Str,
  LParen, RParen, LBrack, RBrack,
  Colon, Dot, Comma, Semi, Eq, At,
  DArrow,   // =>
  Arrow,    // ->
  BindOp,   // >>=
  Bullet,   // •
  PlugBullet,  // plug•
  Flows,    // ⊑ (lexed, never part of the grammar)
  DirLattice, DirStore,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::int64_t int_val = 0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  Lexer(std::string_view src, std::string_view file) : src_(src), file_(file) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_ws();
      if (pos_ >= src_.size()) {
        out.push_back(make(Tok::End));
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(std::string(file_), line_, col_, msg);
  }

  Token make(Tok kind, std::string text = "") {
    return {kind, std::move(text), 0, line_, col_};
  }

  char peek(std::size_t off = 0) const {
    return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
  }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '-' && peek(1) == '-') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  bool at_utf8(const char* bytes) const {
    std::size_t n = std::char_traits<char>::length(bytes);
    return src_.compare(pos_, n, bytes) == 0;
  }

  Token next() {
    int line = line_, col = col_;
    auto tok = [&](Tok kind, std::string text = "") {
      Token t{kind, std::move(text), 0, line, col};
      return t;
    };
    char c = peek();
    if (at_utf8("\xe2\x80\xa2")) {  // •
      advance(3);
      return tok(Tok::Bullet);
    }
    if (at_utf8("\xe2\x8a\x91")) {  // ⊑
      advance(3);
      return tok(Tok::Flows);
    }
    if (c == '(') { advance(); return tok(Tok::LParen); }
    if (c == ')') { advance(); return tok(Tok::RParen); }
    if (c == '[') { advance(); return tok(Tok::LBrack); }
    if (c == ']') { advance(); return tok(Tok::RBrack); }
    if (c == ':') { advance(); return tok(Tok::Colon); }
    if (c == '.') { advance(); return tok(Tok::Dot); }
    if (c == ',') { advance(); return tok(Tok::Comma); }
    if (c == ';') { advance(); return tok(Tok::Semi); }
    if (c == '@') { advance(); return tok(Tok::At); }
    if (c == '=') {
      if (peek(1) == '>') { advance(2); return tok(Tok::DArrow); }
      advance();
      return tok(Tok::Eq);
    }
    if (c == '>') {
      if (peek(1) == '>' && peek(2) == '=') { advance(3); return tok(Tok::BindOp); }
      fail("stray '>'");
    }
    if (c == '-') {
      if (peek(1) == '>') { advance(2); return tok(Tok::Arrow); }
      if (std::isdigit(static_cast<unsigned char>(peek(1)))) return number();
      fail("stray '-'");
    }
    if (c == '#') {
      advance();
      std::string word;
      while (std::isalpha(static_cast<unsigned char>(peek()))) {
        word += peek();
        advance();
      }
      if (word == "lattice") return tok(Tok::DirLattice);
      if (word == "store") return tok(Tok::DirStore);
      fail("unknown directive #" + word);
    }
    if (c == '"') return string_lit();
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (std::isalnum(static_cast<unsigned char>(peek())) ||
             peek() == '_' || peek() == '\'') {
        word += peek();
        advance();
      }
      if (word == "plug" && at_utf8("\xe2\x80\xa2")) {
        advance(3);
        return tok(Tok::PlugBullet);
      }
      if (word == "plugHole") return tok(Tok::PlugBullet);
      if (word == "_hole_") return tok(Tok::Bullet);
      return tok(Tok::Ident, word);
    }
    fail(std::string("unsupported character '") + c + "'");
  }

  Token number() {
    int line = line_, col = col_;
    std::string digits;
    if (peek() == '-') {
      digits += '-';
      advance();
    }
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      digits += peek();
      advance();
    }
    Token t{Tok::Int, digits, 0, line, col};
    try {
      t.int_val = std::stoll(digits);
    } catch (const std::exception&) {
      throw ParseError(std::string(file_), line, col,
                       "integer literal out of range: " + digits);
    }
    return t;
  }

  Token string_lit() {
    int line = line_, col = col_;
    advance();  // opening quote
    std::string out;
    while (true) {
      if (pos_ >= src_.size()) fail("unterminated string literal");
      char c = peek();
      if (c == '"') { advance(); break; }
      if (c == '\\') {
        advance();
        char e = peek();
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '\\': out += '\\'; break;
          case '"': out += '"'; break;
          default: fail(std::string("unknown escape \\") + e);
        }
        advance();
      } else {
        out += c;
        advance();
      }
    }
    return {Tok::Str, std::move(out), 0, line, col};
  }

  std::string_view src_;
  std::string_view file_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

const std::unordered_set<std::string>& keywords() {
  static const std::unordered_set<std::string> kws{
      "fun", "forall", "if", "then", "else", "pure", "label", "unlabel",
      "plug", "newRef", "readRef", "writeRef", "true", "false", "unit",
      "Type", "Int", "Bool", "Unit", "Str", "Label", "DIO", "Labeled", "Ref",
      "add", "concat", "join", "L", "H", "U", "A", "PC", "plugHole", "_hole_"};
  return kws;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, std::string file, const LabelAlgebra* alg)
      : toks_(std::move(toks)), file_(std::move(file)), alg_(alg) {}

  SourceFile file(bool allow_directives) {
    SourceFile out;
    bool lattice_seen = false;
    while (peek().kind == Tok::DirLattice || peek().kind == Tok::DirStore) {
      if (!allow_directives) fail("directives are not allowed here");
      if (peek().kind == Tok::DirLattice) {
        if (lattice_seen) fail("duplicate #lattice directive");
        lattice_seen = true;
        next();
        auto name = expect_ident("lattice name");
        const auto* alg = find_algebra(name);
        if (!alg) fail("unknown lattice '" + name + "'");
        alg_ = alg;
      } else {
        next();
        parse_store_entries(out.store);
      }
    }
    out.term = expr();
    expect(Tok::End, "end of input");
    out.algebra = alg_;
    return out;
  }

  Label label_only() {
    auto t = atom();
    expect(Tok::End, "end of input");
    if (t->tag != Tag::LabelLit) fail("expected a label literal");
    return t->label;
  }

  std::vector<StoreInit> store_only() {
    std::vector<StoreInit> out;
    parse_store_entries(out);
    expect(Tok::End, "end of input");
    return out;
  }

 private:
  const Token& peek(std::size_t off = 0) const {
    std::size_t i = pos_ + off;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }

  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    const auto& t = peek();
    throw ParseError(file_, t.line, t.col, msg);
  }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what);
    next();
  }

  std::string expect_ident(const char* what) {
    if (peek().kind != Tok::Ident) fail(std::string("expected ") + what);
    return next().text;
  }

  bool at_ident(const char* word) const {
    return peek().kind == Tok::Ident && peek().text == word;
  }

  SrcLoc loc() const { return {peek().line, peek().col}; }

  void parse_store_entries(std::vector<StoreInit>& out) {
    while (true) {
      StoreInit init;
      init.label = label_atom();
      expect(Tok::Eq, "'=' in store initializer");
      if (peek().kind == Tok::Bullet) {
        next();
        init.erased = true;
      } else {
        expect(Tok::LBrack, "'[' or '•' in store initializer");
        if (peek().kind != Tok::RBrack) {
          init.cells.push_back(expr());
          while (peek().kind == Tok::Comma) {
            next();
            init.cells.push_back(expr());
          }
        }
        expect(Tok::RBrack, "']'");
      }
      out.push_back(std::move(init));
      if (peek().kind != Tok::Semi) break;
      next();
    }
  }

  // expr := bind (':' bind)?
  TermPtr expr() {
    auto loc0 = loc();
    auto e = bind_expr();
    if (peek().kind == Tok::Colon) {
      next();
      auto ty = bind_expr();
      return with_loc(mk_ascribe(e, ty), loc0);
    }
    return e;
  }

  // bind := arrow ('>>=' arrow)*
  TermPtr bind_expr() {
    auto loc0 = loc();
    auto e = arrow_expr();
    while (peek().kind == Tok::BindOp) {
      next();
      e = with_loc(mk_bind(e, arrow_expr()), loc0);
    }
    return e;
  }

  // arrow := fun/forall/if | app ('->' arrow)?
  TermPtr arrow_expr() {
    if (at_ident("fun")) return lambda_expr();
    if (at_ident("forall")) return forall_expr();
    if (at_ident("if")) return if_expr();
    auto loc0 = loc();
    auto e = app_expr();
    if (peek().kind == Tok::Arrow) {
      next();
      auto cod = arrow_expr();
      return with_loc(mk_forall(fresh_name("_"), e, cod), loc0);
    }
    return e;
  }

  struct Binder {
    std::string surface;
    std::string unique;
    TermPtr ann;
  };

  // (x:T), (x,y:T) or bare x:T / x,y:T with the annotation at arrow level
  std::vector<Binder> binder_group() {
    std::vector<Binder> out;
    bool paren = peek().kind == Tok::LParen;
    if (paren) next();
    std::vector<std::string> names;
    names.push_back(var_name());
    while (peek().kind == Tok::Comma) {
      next();
      names.push_back(var_name());
    }
    expect(Tok::Colon, "':' in binder");
    auto ann = arrow_expr();
    if (paren) expect(Tok::RParen, "')'");
    for (auto& n : names) out.push_back({n, fresh_name(n), ann});
    return out;
  }

  std::string var_name() {
    if (peek().kind != Tok::Ident) fail("expected a variable name");
    const auto& t = peek();
    if (keywords().contains(t.text)) fail("'" + t.text + "' is a keyword");
    return next().text;
  }

  // Each group's annotation may refer to the binders of earlier groups, so
  // scope entries are pushed group by group.
  std::vector<Binder> binder_groups() {
    std::vector<Binder> binders;
    auto take = [&](std::vector<Binder> group) {
      for (auto& b : group) {
        push_scope(b.surface, b.unique);
        binders.push_back(std::move(b));
      }
    };
    take(binder_group());
    while (peek().kind == Tok::LParen) take(binder_group());
    return binders;
  }

  TermPtr lambda_expr() {
    auto loc0 = loc();
    next();  // fun
    auto binders = binder_groups();
    expect(Tok::DArrow, "'=>' after fun binders");
    auto body = expr();
    for (std::size_t i = 0; i < binders.size(); ++i) pop_scope();
    for (auto it = binders.rbegin(); it != binders.rend(); ++it)
      body = mk_lambda(it->unique, it->ann, body);
    return with_loc(body, loc0);
  }

  TermPtr forall_expr() {
    auto loc0 = loc();
    next();  // forall
    auto binders = binder_groups();
    expect(Tok::Dot, "'.' after forall binders");
    auto body = expr();
    for (std::size_t i = 0; i < binders.size(); ++i) pop_scope();
    for (auto it = binders.rbegin(); it != binders.rend(); ++it)
      body = mk_forall(it->unique, it->ann, body);
    return with_loc(body, loc0);
  }

  TermPtr if_expr() {
    auto loc0 = loc();
    next();  // if
    auto c = expr();
    if (!at_ident("then")) fail("expected 'then'");
    next();
    auto t = expr();
    if (!at_ident("else")) fail("expected 'else'");
    next();
    auto e = expr();
    return with_loc(mk_if(c, t, e), loc0);
  }

  static bool starts_atom(const Token& t) {
    switch (t.kind) {
      case Tok::LParen:
      case Tok::Int:
      case Tok::Str:
      case Tok::Bullet:
      case Tok::PlugBullet:
        return true;
      case Tok::Ident:
        return t.text != "then" && t.text != "else" && t.text != "fun" &&
               t.text != "forall" && t.text != "if";
      default:
        return false;
    }
  }

  TermPtr app_expr() {
    auto loc0 = loc();
    auto e = atom();
    while (starts_atom(peek()))
      e = with_loc(mk_app(e, atom()), loc0);
    return e;
  }

  Id parse_id() {
    if (peek().kind == Tok::Int) {
      auto v = next().int_val;
      if (v < 0) fail("compartment index must be a natural number");
      return Id::nat(static_cast<std::uint64_t>(v));
    }
    auto word = expect_ident("'bot', 'top' or a natural number");
    std::string lower;
    for (char c : word) lower += static_cast<char>(std::tolower(c));
    if (lower == "bot") return Id::bot();
    if (lower == "top") return Id::top();
    fail("unknown compartment index '" + word + "'");
  }

  Label label_atom() {
    auto t = atom();
    if (t->tag != Tag::LabelLit) fail("expected a label literal");
    return t->label;
  }

  void require_lattice(const char* name, const char* needed) {
    if (alg_->name() != needed)
      fail(std::string("label ") + name + " requires the " + needed +
           " lattice (active: " + std::string(alg_->name()) + ")");
  }

  TermPtr atom() {
    auto loc0 = loc();
    auto at = [&](TermPtr t) { return with_loc(std::move(t), loc0); };
    const Token& t = peek();
    switch (t.kind) {
      case Tok::LParen: {
        next();
        auto e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Int:
        return at(mk_int(next().int_val));
      case Tok::Str:
        return at(mk_str(next().text));
      case Tok::Bullet:
        next();
        return at(mk_hole());
      case Tok::PlugBullet:
        next();
        return at(mk_plug_hole(atom()));
      case Tok::Ident:
        break;
      default:
        fail("expected a term");
    }

    const std::string w = t.text;
    if (w == "true") { next(); return at(mk_bool(true)); }
    if (w == "false") { next(); return at(mk_bool(false)); }
    if (w == "unit") { next(); return at(mk_unit()); }
    if (w == "Type") { next(); return at(mk_type()); }
    if (w == "Int") { next(); return at(mk_int_t()); }
    if (w == "Bool") { next(); return at(mk_bool_t()); }
    if (w == "Unit") { next(); return at(mk_unit_t()); }
    if (w == "Str") { next(); return at(mk_str_t()); }
    if (w == "Label") { next(); return at(mk_label_t()); }
    if (w == "add") { next(); return at(mk_prim(Prim::Add)); }
    if (w == "concat") { next(); return at(mk_prim(Prim::Concat)); }
    if (w == "join") { next(); return at(mk_prim(Prim::Join)); }
    if (w == "pure") { next(); return at(mk_pure(atom())); }
    if (w == "label") { next(); return at(mk_label_op(atom())); }
    if (w == "unlabel") { next(); return at(mk_unlabel(atom())); }
    if (w == "plug") { next(); return at(mk_plug(atom())); }
    if (w == "readRef") { next(); return at(mk_read_ref(atom())); }
    if (w == "writeRef") {
      next();
      auto a = atom();
      return at(mk_write_ref(a, atom()));
    }
    if (w == "newRef") {
      next();
      expect(Tok::At, "'@' after newRef");
      auto l = atom();
      return at(mk_new_ref(l, atom()));
    }
    if (w == "DIO") {
      next();
      auto a = atom();
      if (starts_atom(peek())) return at(mk_dio_t(a, atom()));
      return at(mk_dio_val(a));
    }
    if (w == "Labeled") {
      next();
      auto a = atom();
      if (starts_atom(peek())) return at(mk_labeled_t(a, atom()));
      return at(mk_labeled_val(a));
    }
    if (w == "Ref") {
      next();
      auto l = atom();
      if (peek().kind == Tok::Int) {
        auto v = next().int_val;
        if (v < 0) fail("reference index must be a natural number");
        return at(mk_ref_val(l, static_cast<std::uint64_t>(v)));
      }
      if (peek().kind == Tok::Bullet) {
        next();
        return at(mk_ref_val(l, std::nullopt));
      }
      return at(mk_ref_t(l, atom()));
    }
    if (w == "L" || w == "H") {
      require_lattice(w.c_str(), "two_point");
      next();
      return at(mk_label_lit(w == "L" ? TwoPoint::Low : TwoPoint::High));
    }
    if (w == "U" || w == "A" || w == "PC") {
      require_lattice(w.c_str(), "compartment");
      next();
      expect(Tok::LParen, "'(' after compartment constructor");
      Id first = parse_id();
      if (w == "U") {
        expect(Tok::RParen, "')'");
        return at(mk_label_lit(Compartment::user(first)));
      }
      expect(Tok::Comma, "','");
      Id second = parse_id();
      expect(Tok::RParen, "')'");
      return at(mk_label_lit(w == "A" ? Compartment::author(first, second)
                                      : Compartment::pc(first, second)));
    }
    if (keywords().contains(w)) fail("unexpected keyword '" + w + "'");

    next();
    return at(mk_var(resolve(w)));
  }

  void push_scope(const std::string& surface, const std::string& unique) {
    scope_.emplace_back(surface, unique);
  }
  void pop_scope() { scope_.pop_back(); }

  std::string resolve(const std::string& surface) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == surface) return it->second;
    return surface;  // free variable
  }

  std::vector<Token> toks_;
  std::string file_;
  const LabelAlgebra* alg_;
  std::size_t pos_ = 0;
  std::vector<std::pair<std::string, std::string>> scope_;
};

}  // namespace

SourceFile parse_file(std::string_view text, std::string_view filename) {
  Lexer lex(text, filename);
  Parser p(lex.run(), std::string(filename), &two_point_algebra());
  return p.file(/*allow_directives=*/true);
}

TermPtr parse_term(std::string_view text, const LabelAlgebra& alg,
                   std::string_view filename) {
  Lexer lex(text, filename);
  Parser p(lex.run(), std::string(filename), &alg);
  return p.file(/*allow_directives=*/false).term;
}

Label parse_label(std::string_view text, const LabelAlgebra& alg) {
  Lexer lex(text, "<label>");
  Parser p(lex.run(), "<label>", &alg);
  return p.label_only();
}

std::vector<StoreInit> parse_store_inits(std::string_view text,
                                         const LabelAlgebra& alg) {
  Lexer lex(text, "<store>");
  Parser p(lex.run(), "<store>", &alg);
  return p.store_only();
}

}  // namespace ttsec
