#include "hx/parse.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "hx/kernel.hpp"
#include "hx/models.hpp"
#include "hx/print.hpp"

namespace hx {

namespace fs = std::filesystem;

ParseError::ParseError(std::string file, Span span, const std::string& msg)
    : Error(file + ":" + std::to_string(span.line) + ":" + std::to_string(span.col) + ": " + msg),
      file(std::move(file)),
      span(span),
      bare(msg) {}

const NamedProof* Document::find(const Ident& name) const {
  for (const auto& p : proofs)
    if (p.name == name) return &p;
  return nullptr;
}

const StateModel& Document::semantics() const {
  static const FreeModel free_model;
  return model ? *model : free_model;
}

namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

struct Tok {
  enum Kind { Ident, Number, String, Sym, End } kind = End;
  std::string text;
  Span span;
  /// No whitespace between this token and the previous one.
  bool adjacent = false;
};

const std::vector<std::pair<std::string, std::pair<Tok::Kind, std::string>>>& unicode_tokens() {
  static const std::vector<std::pair<std::string, std::pair<Tok::Kind, std::string>>> t{
      {"⊢_H", {Tok::Sym, "|-"}}, {"⊢_S", {Tok::Sym, "|-"}}, {"⊢", {Tok::Sym, "|-"}},
      {"∧", {Tok::Sym, "/\\"}},  {"∨", {Tok::Sym, "\\/"}},  {"→", {Tok::Sym, "->"}},
      {"⇒", {Tok::Sym, "=>"}},   {"¬", {Tok::Sym, "~"}},    {"≤", {Tok::Sym, "<="}},
      {"⟨", {Tok::Sym, "{"}},    {"⟩", {Tok::Sym, "}"}},    {"∗", {Tok::Sym, "*"}},
      {"×", {Tok::Sym, "*"}},    {"∘", {Tok::Sym, "∘"}},    {"⊤", {Tok::Ident, "true"}},
      {"⊥", {Tok::Ident, "false"}}, {"∀", {Tok::Ident, "all"}}, {"∃", {Tok::Ident, "ex"}},
      {"λ", {Tok::Ident, "fun"}},
  };
  return t;
}

/// Byte length of a Greek letter at `i` (λ excluded), else 0.
std::size_t greek_len(std::string_view src, std::size_t i) {
  if (i + 1 >= src.size()) return 0;
  auto a = static_cast<unsigned char>(src[i]), b = static_cast<unsigned char>(src[i + 1]);
  unsigned cp = ((a & 0x1Fu) << 6) | (b & 0x3Fu);
  if ((a & 0xE0) != 0xC0 || (b & 0xC0) != 0x80) return 0;
  return cp >= 0x391 && cp <= 0x3C9 && cp != 0x3BB ? 2 : 0;
}

std::vector<Tok> lex(std::string_view src, const std::string& file) {
  static const char* syms[] = {"<->", "|-", "/\\", "\\/", "->", "=>", "<=", ":=", "(", ")", "{", "}", "[", "]",
                               ",",   ".",  ":",   ";",   "~",  "=",  "<",  ">",  "+", "*"};
  std::vector<Tok> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  bool space = true;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      unsigned char c = static_cast<unsigned char>(src[i + k]);
      if (c == '\n') {
        ++line;
        col = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++col;
      }
    }
    i += n;
  };
  auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      space = true;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      space = true;
      continue;
    }
    Tok t;
    t.span.line = line;
    t.span.col = col;
    t.adjacent = !space && !out.empty();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || greek_len(src, i)) {
      std::size_t j = i;
      while (j < src.size()) {
        if (std::size_t g = greek_len(src, j))
          j += g;
        else if (ident_char(src[j]))
          ++j;
        else
          break;
      }
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Number;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (c == '"') {
      std::size_t j = i + 1;
      std::string s;
      while (j < src.size() && src[j] != '"' && src[j] != '\n') {
        if (src[j] == '\\' && j + 1 < src.size()) ++j;
        s += src[j++];
      }
      if (j >= src.size() || src[j] != '"') throw ParseError(file, t.span, "unterminated string");
      t.kind = Tok::String;
      t.text = s;
      advance(j + 1 - i);
    } else {
      bool matched = false;
      if (static_cast<unsigned char>(c) >= 0x80) {
        for (const auto& [u, tok] : unicode_tokens())
          if (src.substr(i, u.size()) == u) {
            t.kind = tok.first;
            t.text = tok.second;
            advance(u.size());
            matched = true;
            break;
          }
      } else {
        for (const char* s : syms) {
          std::string_view sv(s);
          if (src.substr(i, sv.size()) == sv) {
            t.kind = Tok::Sym;
            t.text = std::string(sv);
            advance(sv.size());
            matched = true;
            break;
          }
        }
      }
      if (!matched) {
        std::size_t n = 1;
        while (i + n < src.size() && (static_cast<unsigned char>(src[i + n]) & 0xC0) == 0x80) ++n;
        throw ParseError(file, t.span, "unexpected character '" + std::string(src.substr(i, n)) + "'");
      }
    }
    t.span.end_line = line;
    t.span.end_col = col;
    out.push_back(std::move(t));
    space = false;
  }
  Tok end;
  end.kind = Tok::End;
  end.span = Span{line, col, line, col};
  out.push_back(end);
  return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

const std::set<std::string>& reserved() {
  static const std::set<std::string> r{"theory", "mode",     "model",  "canonical", "func",    "pred",
                                       "statepred", "constant", "haxiom", "saxiom", "equation", "proof",
                                       "plproof", "realizer", "by",     "then",      "else",    "fun",
                                       "if",      "true",     "false",  "ex",        "all"};
  return r;
}

const std::set<std::string>& sa_builtin_functions() {
  static const std::set<std::string> s{"0", "succ", "add", "mul", "pred"};
  return s;
}

const std::set<std::string>& sa_builtin_equations() {
  static const std::set<std::string> s{"add0", "addS", "mul0", "mulS", "pred0", "predS"};
  return s;
}

class Parser {
 public:
  Parser(std::string_view text, std::string file, Theory& th, Document* doc = nullptr, fs::path dir = {})
      : file_(std::move(file)), toks_(lex(text, file_)), th_(th), doc_(doc), dir_(std::move(dir)) {}

  bool at_end() const { return peek().kind == Tok::End; }
  void expect_end() {
    if (!at_end()) fail("unexpected '" + peek().text + "'");
  }

  // --- token helpers -------------------------------------------------------

  const Tok& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Tok& next() {
    const Tok& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool is_sym(const char* s, std::size_t k = 0) const { return peek(k).kind == Tok::Sym && peek(k).text == s; }
  bool is_word(const char* s, std::size_t k = 0) const { return peek(k).kind == Tok::Ident && peek(k).text == s; }
  bool accept_sym(const char* s) {
    if (!is_sym(s)) return false;
    next();
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(file_, peek().span, msg); }
  [[noreturn]] void fail_at(const Span& sp, const std::string& msg) const { throw ParseError(file_, sp, msg); }
  void expect_sym(const char* s) {
    if (!accept_sym(s)) fail(std::string("expected '") + s + "', found " + describe(peek()));
  }
  void expect_word(const char* s) {
    if (!is_word(s)) fail(std::string("expected '") + s + "', found " + describe(peek()));
    next();
  }
  static std::string describe(const Tok& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + t.text + "'";
  }
  // `pred` is both a declaration keyword and the SA predecessor; directly
  // followed by "(" it is the function symbol.
  bool keyword_at(std::size_t k = 0) const {
    const Tok& t = peek(k);
    if (!reserved().count(t.text)) return false;
    return !(t.text == "pred" && is_sym("(", k + 1) && peek(k + 1).adjacent);
  }
  Ident ident() {
    if (peek().kind != Tok::Ident) fail("expected an identifier, found " + describe(peek()));
    if (keyword_at()) fail("'" + peek().text + "' is a keyword");
    return next().text;
  }
  /// An identifier or a numeral (for declarations of numeric constants).
  Ident symbol_name() {
    if (peek().kind == Tok::Number) return next().text;
    return ident();
  }
  std::uint64_t number() {
    if (peek().kind != Tok::Number) fail("expected a number, found " + describe(peek()));
    try {
      return std::stoull(next().text);
    } catch (const std::exception&) {
      fail_at(toks_[pos_ - 1].span, "number out of range");
    }
  }
  Span span_from(const Span& start) const {
    const Tok& last = toks_[pos_ == 0 ? 0 : pos_ - 1];
    return Span{start.line, start.col, last.span.end_line, last.span.end_col};
  }

  // --- terms ---------------------------------------------------------------

  Term numeral_term(std::uint64_t k, const Span& sp) {
    if (th_.sig.mode == Mode::SA) return numeral(k);
    std::string name = std::to_string(k);
    if (!th_.sig.functions.count(name)) fail_at(sp, "unknown constant '" + name + "' (declare it with func " + name + " 0)");
    return Term::app(name);
  }

  /// In strict position a function application needs '(' directly after the symbol.
  Term term(bool strict) {
    Term t = term_primary(strict);
    while (is_sym("+") && peek(1).kind == Tok::Number) {
      next();
      t = succ_n(t, number());
    }
    return t;
  }

  Term term_primary(bool strict) {
    const Tok& t = peek();
    if (t.kind == Tok::Number) {
      Span sp = t.span;
      return numeral_term(number(), sp);
    }
    if (accept_sym("(")) {
      Term r = term(false);
      expect_sym(")");
      return r;
    }
    Span sp = t.span;
    Ident name = ident();
    if (is_sym("(") && (peek().adjacent || !strict)) {
      next();
      std::vector<Term> args;
      if (!is_sym(")")) {
        args.push_back(term(false));
        while (accept_sym(",")) args.push_back(term(false));
      }
      expect_sym(")");
      auto it = th_.sig.functions.find(name);
      if (it == th_.sig.functions.end()) fail_at(sp, "unknown function symbol '" + name + "'");
      if (static_cast<std::size_t>(it->second) != args.size())
        fail_at(sp, "'" + name + "' expects " + std::to_string(it->second) + " arguments");
      return Term::app(name, std::move(args));
    }
    auto it = th_.sig.functions.find(name);
    if (it != th_.sig.functions.end()) {
      if (it->second != 0) fail_at(sp, "'" + name + "' expects " + std::to_string(it->second) + " arguments");
      return Term::app(name);
    }
    return Term::var(name);
  }

  std::vector<Term> term_args() {
    std::vector<Term> args;
    if (accept_sym("(")) {
      if (!is_sym(")")) {
        args.push_back(term(false));
        while (accept_sym(",")) args.push_back(term(false));
      }
      expect_sym(")");
    }
    return args;
  }

  // --- state formulas ------------------------------------------------------

  StateFormula sf() {
    StateFormula l = sf_or();
    if (accept_sym("->")) return StateFormula::imp(l, sf());
    return l;
  }
  StateFormula sf_or() {
    StateFormula l = sf_and();
    if (accept_sym("\\/")) return StateFormula::disj(l, sf_or());
    return l;
  }
  StateFormula sf_and() {
    StateFormula l = sf_unary();
    if (accept_sym("/\\")) return StateFormula::conj(l, sf_and());
    return l;
  }
  StateFormula sf_unary() {
    if (accept_sym("~")) return StateFormula::neg(sf_unary());
    if (is_word("true")) {
      next();
      return StateFormula::top();
    }
    if (is_word("false")) {
      next();
      return StateFormula::bot();
    }
    if (is_sym("(")) {
      std::size_t save = pos_;
      try {
        next();
        StateFormula f = sf();
        expect_sym(")");
        return f;
      } catch (const ParseError&) {
        pos_ = save;
      }
    }
    return sf_atom();
  }
  StateFormula sf_atom() {
    const Tok& t = peek();
    Span sp = t.span;
    if (t.kind == Tok::Ident && !(is_sym("<=", 1) || is_sym("=", 1))) {
      if (formula_metavars_.count(t.text)) {
        Ident p = next().text;
        if (swap_post_ && is_sym("[")) {
          next();
          Ident l = ident();
          expect_sym("<->");
          Ident lp = ident();
          expect_sym("]");
          *swap_post_ = SwapPost{p, l, lp};
        }
        return StateFormula::atom(p);
      }
      auto it = th_.sig.state_predicates.find(t.text);
      if (it != th_.sig.state_predicates.end()) {
        Ident p = next().text;
        std::vector<Term> args = term_args();
        if (args.size() != static_cast<std::size_t>(it->second))
          fail_at(sp, "state predicate '" + p + "' expects " + std::to_string(it->second) + " arguments");
        return StateFormula::atom(p, std::move(args));
      }
      if (th_.sig.predicates.count(t.text)) fail("'" + t.text + "' is a main predicate, not a state predicate");
    }
    Term a = term(false);
    if (accept_sym("<=")) return StateFormula::atom("le", {a, term(false)});
    if (accept_sym("=")) return StateFormula::atom("eq", {a, term(false)});
    fail_at(sp, "expected a state formula");
  }

  // --- main formulas -------------------------------------------------------

  MainFormula mf() {
    if (is_word("ex")) {
      next();
      Ident v = ident();
      expect_sym(".");
      return MainFormula::exists(v, mf());
    }
    if (is_word("all")) {
      next();
      Ident v = ident();
      accept_sym(".");
      return MainFormula::forall(v, triple());
    }
    MainFormula l = mf_or();
    if (accept_sym("=>")) return MainFormula::imp(l, triple());
    return l;
  }
  MainFormula mf_or() {
    MainFormula l = mf_and();
    if (accept_sym("\\/")) return MainFormula::disj(l, mf_or());
    return l;
  }
  MainFormula mf_and() {
    MainFormula l = mf_unary();
    if (accept_sym("/\\")) return MainFormula::conj(l, mf_and());
    return l;
  }
  MainFormula mf_unary() {
    if (is_word("true")) {
      next();
      return MainFormula::top();
    }
    if (is_word("false")) {
      next();
      return MainFormula::bot();
    }
    if (is_word("ex") || is_word("all")) return mf();
    if (is_sym("(")) {
      std::size_t save = pos_;
      try {
        next();
        MainFormula f = mf();
        expect_sym(")");
        return f;
      } catch (const ParseError&) {
        pos_ = save;
      }
    }
    const Tok& t = peek();
    Span sp = t.span;
    if (t.kind == Tok::Ident && !(is_sym("<=", 1) || is_sym("=", 1))) {
      auto it = th_.sig.predicates.find(t.text);
      if (it != th_.sig.predicates.end()) {
        Ident p = next().text;
        std::vector<Term> args = term_args();
        if (args.size() != static_cast<std::size_t>(it->second))
          fail_at(sp, "predicate '" + p + "' expects " + std::to_string(it->second) + " arguments");
        return MainFormula::atom(p, std::move(args));
      }
      if (th_.sig.state_predicates.count(t.text))
        fail("'" + t.text + "' is a state predicate; main formulas need a main predicate");
    }
    Term a = term(false);
    if (accept_sym("=")) return MainFormula::atom("eq", {a, term(false)});
    if (accept_sym("<=")) return MainFormula::atom("le", {a, term(false)});
    fail_at(sp, "expected a formula");
  }

  StateFormula braced_sf() {
    expect_sym("{");
    StateFormula f = sf();
    expect_sym("}");
    return f;
  }
  MainFormula bracketed_mf() {
    expect_sym("[");
    MainFormula f = mf();
    expect_sym("]");
    return f;
  }
  Triple triple() {
    StateFormula pre = braced_sf();
    MainFormula body = mf();
    StateFormula post = braced_sf();
    return Triple{pre, body, post};
  }

  StateSequent state_sequent() {
    StateSequent seq{{}, StateFormula::top()};
    if (!is_sym("|-")) {
      seq.hyps.push_back(sf());
      while (accept_sym(",")) seq.hyps.push_back(sf());
    }
    expect_sym("|-");
    seq.goal = sf();
    return seq;
  }

  // --- types ---------------------------------------------------------------

  StType type() {
    StType l = type_sum();
    if (accept_sym("->")) return StType::arrow(l, type());
    return l;
  }
  StType type_sum() {
    StType l = type_prod();
    if (accept_sym("+")) return StType::sum(l, type_sum());
    return l;
  }
  StType type_prod() {
    StType l = type_atom();
    if (accept_sym("*")) return StType::prod(l, type_prod());
    return l;
  }
  StType type_atom() {
    if (accept_sym("(")) {
      StType t = type();
      expect_sym(")");
      return t;
    }
    if (peek().kind == Tok::Ident) {
      const std::string& s = peek().text;
      if (s == "D" || s == "nat") {
        next();
        return StType::d();
      }
      if (s == "C") {
        next();
        return StType::c();
      }
    }
    fail("expected a type, found " + describe(peek()));
  }

  // --- ST terms ------------------------------------------------------------

  StTerm st() {
    if (is_word("fun")) {
      next();
      Ident x;
      StType ty = StType::d();
      if (accept_sym("(")) {
        x = ident();
        expect_sym(":");
        ty = type();
        expect_sym(")");
      } else {
        x = ident();
        if (accept_sym(":")) ty = type_atom();
      }
      if (!accept_sym("->")) expect_sym(".");
      bound_.push_back(x);
      StTerm body = st();
      bound_.pop_back();
      return StTerm::lam(x, ty, body);
    }
    if (is_word("if")) {
      next();
      StateFormula c = sf();
      expect_word("then");
      StTerm s = st_star();
      expect_word("else");
      return StTerm::ite(c, s, st());
    }
    return st_star();
  }
  StTerm st_star() {
    StTerm l = st_app();
    for (;;) {
      if (accept_sym("*"))
        l = star(l, st_app());
      else if (accept_sym("∘"))
        l = StTerm::comp(l, st_app());
      else
        return l;
    }
  }
  bool st_atom_start() const {
    const Tok& t = peek();
    if (t.kind == Tok::Number) return true;
    if (t.kind == Tok::Ident) return !keyword_at();
    return is_sym("(") || is_sym("<");
  }
  StTerm st_app() {
    StTerm f = st_atom();
    while (st_atom_start()) f = StTerm::app(f, st_atom());
    return f;
  }
  std::vector<StTerm> st_args(std::size_t n) {
    expect_sym("(");
    std::vector<StTerm> out;
    for (std::size_t i = 0; i < n; ++i) {
      if (i) expect_sym(",");
      out.push_back(st());
    }
    expect_sym(")");
    return out;
  }
  StType bracket_type() {
    expect_sym("[");
    StType t = type();
    expect_sym("]");
    return t;
  }
  StTerm st_atom() {
    const Tok& t = peek();
    Span sp = t.span;
    if (t.kind == Tok::Number) {
      std::uint64_t k = number();
      if (th_.sig.mode == Mode::SA) return term_to_st(numeral(k));
      return term_to_st(numeral_term(k, sp));
    }
    if (accept_sym("(")) {
      StTerm r = st();
      expect_sym(")");
      return r;
    }
    if (accept_sym("<")) {
      StTerm a = st();
      expect_sym(",");
      StTerm b = st();
      expect_sym(">");
      return StTerm::comp(a, b);
    }
    if (t.kind != Tok::Ident) fail("expected a term, found " + describe(t));
    const std::string w = t.text;
    if (w == "skip") {
      next();
      return StTerm::skip();
    }
    if (w == "default" && is_sym("[", 1)) {
      next();
      return StTerm::default_of(bracket_type());
    }
    if ((w == "p0" || w == "p1") && is_sym("(", 1)) {
      next();
      auto k = st_args(1);
      return w == "p0" ? StTerm::p0(k[0]) : StTerm::p1(k[0]);
    }
    if ((w == "inl" || w == "inr") && is_sym("[", 1)) {
      next();
      StType other = bracket_type();
      auto k = st_args(1);
      return w == "inl" ? StTerm::inj0(k[0], other) : StTerm::inj1(k[0], other);
    }
    if (w == "elim" && is_sym("(", 1)) {
      next();
      auto k = st_args(3);
      return StTerm::elim(k[0], k[1], k[2]);
    }
    if (w == "rec" && is_sym("(", 1)) {
      next();
      auto k = st_args(2);
      return StTerm::rec(k[0], k[1]);
    }
    if (w == "while" && is_sym("[", 1)) {
      next();
      next();
      Ident z = ident();
      expect_sym(".");
      StateFormula c = sf();
      expect_sym("]");
      auto k = st_args(4);
      return StTerm::while_loop(z, c, k[0], k[1], k[2], k[3]);
    }
    Ident name = ident();
    if (std::find(bound_.begin(), bound_.end(), name) != bound_.end()) return StTerm::var(name);
    if (th_.constants.count(name)) return StTerm::constant(name);
    if (th_.sig.functions.count(name)) return StTerm::fun(name);
    return StTerm::var(name);
  }

  // --- derivations ---------------------------------------------------------

  std::optional<StateFormula> opt_sf() {
    if (is_sym("{")) return braced_sf();
    return std::nullopt;
  }

  const HAxiomSchema& haxiom(const Ident& name, const Span& sp) const {
    for (const auto& h : th_.haxioms)
      if (h.name == name) return h;
    fail_at(sp, "unknown state axiom '" + name + "'");
  }

  /// Positional or NAME := term arguments for a schema's term metavariables.
  Binding binding_args(const std::vector<MetaVar>& mvs, const std::string& what, const Span& sp,
                       std::map<Ident, StateFormula>* formulas = nullptr,
                       const std::vector<FormulaMetaVar>* fmvs = nullptr) {
    Binding b;
    std::size_t ti = 0, fi = 0;
    while (!is_sym(")")) {
      if (peek().kind == Tok::Ident && is_sym(":=", 1)) {
        Span ks = peek().span;
        Ident key = next().text;
        next();
        bool is_term = std::any_of(mvs.begin(), mvs.end(), [&](const MetaVar& m) { return m.name == key; });
        bool is_formula = fmvs && std::any_of(fmvs->begin(), fmvs->end(),
                                              [&](const FormulaMetaVar& m) { return m.name == key; });
        if (is_term) {
          b.insert_or_assign(key, term(true));
        } else if (is_formula) {
          formulas->insert_or_assign(key, braced_sf());
        } else {
          fail_at(ks, what + " has no metavariable '" + key + "'");
        }
        continue;
      }
      if (is_sym("{")) {
        if (!fmvs || fi >= fmvs->size()) fail(what + ": too many formula arguments");
        formulas->insert_or_assign((*fmvs)[fi++].name, braced_sf());
        continue;
      }
      if (ti >= mvs.size()) fail(what + ": too many term arguments");
      b.insert_or_assign(mvs[ti++].name, term(true));
    }
    if (b.size() != mvs.size()) fail_at(sp, what + ": expects " + std::to_string(mvs.size()) + " term arguments");
    if (fmvs && formulas->size() != fmvs->size())
      fail_at(sp, what + ": expects " + std::to_string(fmvs->size()) + " formula arguments");
    return b;
  }

  HintSet opt_hints() {
    HintSet h;
    if (is_word("auto")) {
      next();
      return h;
    }
    if (!(is_sym("(") && is_word("using", 1))) return h;
    next();
    next();
    h.automatic = false;
    while (!accept_sym(")")) {
      if (is_word("auto")) {
        next();
        h.automatic = true;
        continue;
      }
      expect_sym("(");
      Span sp = peek().span;
      Ident name = ident();
      const HAxiomSchema& s = haxiom(name, sp);
      Binding b = binding_args(s.metavars, "state axiom '" + name + "'", sp);
      expect_sym(")");
      h.hints.push_back(AxiomHint{name, std::move(b)});
    }
    return h;
  }

  static DerivPtr with_span(const DerivPtr& d, const Span& sp) {
    auto n = std::make_shared<Derivation>(*d);
    n->span = sp;
    return n;
  }

  DerivPtr deriv() {
    Span start = peek().span;
    expect_sym("(");
    if (peek().kind != Tok::Ident) fail("expected a rule name, found " + describe(peek()));
    Span kw_span = peek().span;
    const std::string kw = next().text;
    DerivPtr d;
    auto top = [] { return StateFormula::top(); };
    if (kw == "hyp") {
      Ident u = ident();
      d = rules::hyp(u, opt_sf().value_or(top()));
    } else if (kw == "top") {
      d = rules::top(opt_sf().value_or(top()));
    } else if (kw == "and_I") {
      auto a = deriv();
      d = rules::and_i(a, deriv());
    } else if (kw == "and_EL") {
      d = rules::and_el(deriv());
    } else if (kw == "and_ER") {
      d = rules::and_er(deriv());
    } else if (kw == "or_IL") {
      auto a = deriv();
      d = rules::or_il(a, bracketed_mf());
    } else if (kw == "or_IR") {
      auto a = bracketed_mf();
      d = rules::or_ir(a, deriv());
    } else if (kw == "or_E") {
      auto d1 = deriv();
      Ident u = ident();
      auto d2 = deriv();
      Ident v = ident();
      d = rules::or_e(d1, u, d2, v, deriv());
    } else if (kw == "imp_I") {
      Ident u = ident();
      MainFormula a = bracketed_mf();
      auto body = deriv();
      d = rules::imp_i(u, a, body, opt_sf().value_or(top()));
    } else if (kw == "imp_E") {
      auto a = deriv();
      d = rules::imp_e(a, deriv());
    } else if (kw == "bot_E") {
      auto a = deriv();
      MainFormula f = bracketed_mf();
      d = rules::bot_e(a, f, opt_sf().value_or(top()));
    } else if (kw == "forall_I") {
      Ident x = ident();
      Ident y = peek().kind == Tok::Ident ? ident() : x;
      auto body = deriv();
      d = rules::forall_i(x, y, body, opt_sf().value_or(top()));
    } else if (kw == "forall_E") {
      auto a = deriv();
      d = rules::forall_e(a, term(true));
    } else if (kw == "ex_I") {
      Ident x = ident();
      MainFormula a = bracketed_mf();
      Term t = term(true);
      d = rules::exists_i(x, a, t, deriv());
    } else if (kw == "ex_E") {
      auto d1 = deriv();
      Ident y = ident();
      Ident u = ident();
      d = rules::exists_e(d1, y, u, deriv());
    } else if (kw == "cons") {
      StateFormula pre = braced_sf();
      HintSet h1 = opt_hints();
      auto body = deriv();
      HintSet h2 = opt_hints();
      d = rules::cons(pre, h1, body, h2, braced_sf());
    } else if (kw == "cond") {
      StateFormula a = braced_sf();
      StateFormula b = braced_sf();
      HintSet h = opt_hints();
      auto d1 = deriv();
      d = rules::cond(a, b, h, d1, deriv());
    } else if (kw == "sax") {
      Span sp = peek().span;
      Ident name = ident();
      if (!th_.has_saxiom(name)) fail_at(sp, "unknown main axiom '" + name + "'");
      const SAxiomSchema& s = th_.saxiom(name);
      SAxiomBinding b;
      b.terms = binding_args(s.term_metavars, "main axiom '" + name + "'", sp, &b.formulas, &s.formula_metavars);
      d = rules::saxiom(name, std::move(b));
    } else if (kw == "refl") {
      Term t = term(true);
      d = rules::eq_refl(t, opt_sf().value_or(top()));
    } else if (kw == "sym") {
      d = rules::eq_sym(deriv());
    } else if (kw == "trans") {
      auto a = deriv();
      d = rules::eq_trans(a, deriv());
    } else if (kw == "ext") {
      Ident x = ident();
      MainFormula a = bracketed_mf();
      StateFormula g = opt_sf().value_or(top());
      auto deq = deriv();
      d = rules::ext(x, a, g, deq, deriv());
    } else if (kw == "succ_nz") {
      Term t = term(true);
      d = rules::succ_nonzero(t, opt_sf().value_or(top()));
    } else if (kw == "succ_inj") {
      d = rules::succ_inj(deriv());
    } else if (kw == "defeq") {
      Ident name = ident();
      std::vector<Term> args;
      while (!is_sym("{") && !is_sym(")")) args.push_back(term(true));
      d = rules::def_eq(name, std::move(args), opt_sf().value_or(top()));
    } else if (kw == "ind") {
      Ident x = ident();
      Ident u = ident();
      MainFormula a = bracketed_mf();
      StateFormula g = opt_sf().value_or(top());
      auto base = deriv();
      d = rules::ind(x, u, a, g, base, deriv());
    } else if (kw == "while") {
      Ident x = ident();
      Ident u = ident();
      MainFormula a = bracketed_mf();
      Ident z = ident();
      StateFormula g = braced_sf();
      auto d1 = deriv();
      auto d2 = deriv();
      d = rules::while_rule(x, u, a, z, g, d1, d2, deriv());
    } else if (kw == "comp") {
      auto a = deriv();
      d = derive_comp(a, deriv());
      auto inner = std::make_shared<Derivation>(d->kid(0));
      inner->span = span_from(start);
      auto outer = std::make_shared<Derivation>(*d);
      outer->kids[0] = inner;
      d = outer;
    } else if (kw == "embed") {
      StateFormula a = braced_sf();
      d = embed_pl(deriv(), a);
    } else if (kw == "use") {
      Span sp = peek().span;
      Ident name = ident();
      const NamedProof* p = doc_ ? doc_->find(name) : nullptr;
      if (!p) fail_at(sp, "unknown proof '" + name + "'");
      d = p->deriv;
    } else {
      fail_at(kw_span, "unknown rule '" + kw + "'");
    }
    if (!is_sym(")")) fail("rule '" + kw + "': unexpected " + describe(peek()) + ", expected ')'");
    next();
    if (kw == "use") return d;
    return with_span(d, span_from(start));
  }

  // --- documents -----------------------------------------------------------

  void document() {
    while (!at_end()) declaration();
  }

  template <class F>
  void guarded(const Span& sp, F&& f) {
    try {
      f();
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(file_, sp, e.what());
    }
  }

  void declaration() {
    Span sp = peek().span;
    if (peek().kind != Tok::Ident) fail("expected a declaration, found " + describe(peek()));
    const std::string kw = next().text;
    if (kw == "theory") {
      if (peek().kind != Tok::String) fail("expected a quoted file name");
      Span fsp = peek().span;
      std::string rel = next().text;
      include(dir_ / rel, fsp);
    } else if (kw == "mode") {
      Ident m = ident();
      if (m != "sl" && m != "sa") fail_at(sp, "mode must be sl or sa");
      bool fresh = th_.sig.functions.size() + th_.sig.predicates.size() + th_.sig.state_predicates.size() ==
                       (th_.sig.mode == Mode::SA ? 6 : 0) &&
                   th_.haxioms.empty() && th_.saxioms.empty() && th_.constants.empty();
      Mode want = m == "sa" ? Mode::SA : Mode::SL;
      if (want != th_.sig.mode) {
        if (!fresh) fail_at(sp, "mode must be declared before any symbol");
        Ident model = th_.model;
        auto builders = th_.builders;
        th_ = want == Mode::SA ? Theory::arithmetic() : Theory::predicate_logic();
        th_.model = model;
        th_.builders = builders;
      }
    } else if (kw == "model") {
      Ident name = ident();
      guarded(sp, [&] {
        auto m = make_model(name);
        attach_model(th_, *m);
        if (doc_) doc_->model = m;
      });
    } else if (kw == "canonical") {
      Ident c = symbol_name();
      auto it = th_.sig.functions.find(c);
      if (it == th_.sig.functions.end() || it->second != 0) fail_at(sp, "'" + c + "' is not a declared constant");
      th_.sig.canonical_constant = c;
    } else if (kw == "func" || kw == "pred" || kw == "statepred") {
      Ident name = symbol_name();
      int arity = static_cast<int>(number());
      guarded(sp, [&] {
        if (th_.constants.count(name)) throw Error("'" + name + "' is already a program constant");
        if (kw == "func")
          th_.sig.add_function(name, arity);
        else if (kw == "pred")
          th_.sig.add_predicate(name, arity);
        else
          th_.sig.add_state_predicate(name, arity);
      });
    } else if (kw == "constant") {
      Ident name = ident();
      expect_sym(":");
      StType t = type();
      guarded(sp, [&] { th_.add_constant(name, t); });
    } else if (kw == "haxiom") {
      haxiom_decl(sp);
    } else if (kw == "saxiom") {
      saxiom_decl(sp);
    } else if (kw == "equation") {
      Ident name = ident();
      std::vector<Ident> vars;
      if (accept_sym("(")) {
        if (!is_sym(")")) {
          vars.push_back(ident());
          while (accept_sym(",")) vars.push_back(ident());
        }
        expect_sym(")");
      }
      expect_sym(":");
      Term lhs = term(false);
      expect_sym("=");
      DefEquation e{name, vars, lhs, term(false)};
      guarded(sp, [&] {
        for (const auto& x : th_.equations)
          if (x.name == e.name) throw Error("duplicate equation '" + e.name + "'");
        th_.sig.check(e.lhs);
        th_.sig.check(e.rhs);
        th_.equations.push_back(e);
      });
    } else if (kw == "proof" || kw == "plproof") {
      proof_decl(sp, kw == "plproof");
    } else {
      fail_at(sp, "unknown declaration '" + kw + "'");
    }
  }

  std::vector<MetaVar> term_metavars() {
    std::vector<MetaVar> out;
    while (peek().kind == Tok::Ident && !is_sym(";") && !is_sym(")")) {
      MetaVar m;
      m.name = ident();
      if (accept_sym(":")) {
        expect_sym("{");
        m.domain.push_back(term(false));
        while (accept_sym(",")) m.domain.push_back(term(false));
        expect_sym("}");
      }
      out.push_back(std::move(m));
      if (!accept_sym(",")) break;
    }
    return out;
  }

  void haxiom_decl(const Span& sp) {
    Ident name = ident();
    std::vector<MetaVar> mvs;
    if (accept_sym("(")) {
      mvs = term_metavars();
      expect_sym(")");
    }
    expect_sym(":");
    StateSequent seq = state_sequent();
    HAxiomSchema s{name, std::move(mvs), std::move(seq.hyps), std::move(seq.goal)};
    guarded(sp, [&] { th_.add_haxiom(std::move(s)); });
  }

  void saxiom_decl(const Span& sp) {
    Ident name = ident();
    std::vector<MetaVar> tmvs;
    std::vector<FormulaMetaVar> fmvs;
    if (accept_sym("(")) {
      tmvs = term_metavars();
      if (accept_sym(";")) {
        while (peek().kind == Tok::Ident) {
          FormulaMetaVar f;
          f.name = ident();
          if (accept_sym(":")) {
            expect_word("conj");
            f.shape = FormulaMetaVar::Shape::Conj;
            expect_sym("(");
            while (peek().kind == Tok::Ident) {
              f.preds.push_back(ident());
              if (!accept_sym(",")) break;
            }
            if (accept_sym(";")) {
              f.arg_domain.push_back(term(false));
              while (accept_sym(",")) f.arg_domain.push_back(term(false));
            }
            expect_sym(")");
          }
          fmvs.push_back(std::move(f));
          if (!accept_sym(",")) break;
        }
      }
      expect_sym(")");
    }
    expect_sym(":");
    for (const auto& f : fmvs) formula_metavars_.insert(f.name);
    std::optional<SwapPost> swap;
    StateFormula pre = braced_sf();
    MainFormula body = mf();
    swap_post_ = &swap;
    StateFormula post = braced_sf();
    swap_post_ = nullptr;
    formula_metavars_.clear();
    SAxiomSchema s{name, std::move(tmvs), std::move(fmvs), Triple{pre, body, post}, swap, std::nullopt, ""};
    if (is_word("realizer")) {
      next();
      for (const auto& m : s.term_metavars) bound_.push_back(m.name);
      s.realizer = st();
      bound_.clear();
    } else if (is_word("by")) {
      next();
      s.builder = ident();
    } else {
      fail("expected 'realizer' or 'by'");
    }
    guarded(sp, [&] { th_.add_saxiom(std::move(s)); });
  }

  void proof_decl(const Span& sp, bool pl) {
    NamedProof p;
    p.pl = pl;
    p.file = file_;
    p.span = sp;
    Span name_span = peek().span;
    p.name = ident();
    if (doc_ && doc_->find(p.name)) fail_at(name_span, "duplicate proof '" + p.name + "'");
    if (accept_sym(":")) {
      std::vector<Hypothesis> hyps;
      if (!is_sym("|-")) {
        for (;;) {
          Ident u = ident();
          expect_sym(":");
          hyps.push_back(Hypothesis{u, mf()});
          if (!accept_sym(",")) break;
        }
      }
      expect_sym("|-");
      guarded(sp, [&] { p.ctx = Context(std::move(hyps)); });
      if (pl)
        p.pl_goal = mf();
      else
        p.goal = triple();
    }
    p.embedded = is_sym("(") && peek(1).kind == Tok::Ident && peek(1).text == "embed";
    p.deriv = deriv();
    if (!doc_) fail_at(sp, "proofs need a document");
    doc_->proofs.push_back(std::move(p));
  }

  void include(const fs::path& path, const Span& sp) {
    if (!doc_) fail_at(sp, "includes need a document");
    std::error_code ec;
    fs::path canon = fs::weakly_canonical(path, ec);
    std::string key = ec ? path.string() : canon.string();
    if (std::find(doc_->files.begin(), doc_->files.end(), key) != doc_->files.end()) return;
    std::ifstream in(path);
    if (!in) fail_at(sp, "cannot open '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    doc_->files.push_back(key);
    std::string text = buf.str();
    Parser sub(text, path.string(), th_, doc_, path.parent_path());
    sub.document();
  }

 private:
  std::string file_;
  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
  Theory& th_;
  Document* doc_;
  fs::path dir_;
  std::set<Ident> formula_metavars_;
  std::optional<SwapPost>* swap_post_ = nullptr;
  std::vector<Ident> bound_;
};

template <class T, class F>
T parse_phrase(std::string_view text, const Theory& th, F&& f, const Document* doc = nullptr) {
  Theory copy = th;
  Parser p(text, "<input>", copy, const_cast<Document*>(doc));
  T out = f(p);
  p.expect_end();
  return out;
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

std::string term_list(std::span<const Term> ts) {
  std::string s;
  for (std::size_t i = 0; i < ts.size(); ++i) s += (i ? ", " : "") + to_string(ts[i]);
  return s;
}

std::string binding_string(const Binding& b) {
  std::string s;
  for (const auto& [k, v] : b) s += " " + k + " := " + to_string(v);
  return s;
}

std::string hints_string(const HintSet& h) {
  if (h.automatic && h.hints.empty()) return "auto";
  std::string s = "(using";
  if (h.automatic) s += " auto";
  for (const auto& x : h.hints) s += " (" + x.schema + binding_string(x.binding) + ")";
  return s + ")";
}

std::string braces(const std::optional<StateFormula>& a) { return "{" + to_string(*a) + "}"; }
std::string brackets(const std::optional<MainFormula>& a) { return "[" + to_string(*a) + "]"; }

void print_deriv(const Derivation& d, int indent, std::string& out) {
  auto nl = [&](int k) { return "\n" + std::string(static_cast<std::size_t>(k) * 2, ' '); };
  auto kid = [&](std::size_t i) {
    out += nl(indent + 1);
    print_deriv(d.kid(i), indent + 1, out);
  };
  out += "(" + rule_keyword(d.rule);
  switch (d.rule) {
    case Rule::Hyp:
      out += " " + d.label + " " + braces(d.sf);
      break;
    case Rule::TopAx:
      out += " " + braces(d.sf);
      break;
    case Rule::AndI:
    case Rule::ImpE:
    case Rule::EqTrans:
      kid(0);
      kid(1);
      break;
    case Rule::AndEL:
    case Rule::AndER:
    case Rule::EqSym:
    case Rule::SuccInj:
      kid(0);
      break;
    case Rule::OrIL:
      kid(0);
      out += nl(indent + 1) + brackets(d.mf);
      break;
    case Rule::OrIR:
      out += " " + brackets(d.mf);
      kid(0);
      break;
    case Rule::OrE:
      kid(0);
      out += nl(indent + 1) + d.label;
      kid(1);
      out += nl(indent + 1) + d.label2;
      kid(2);
      break;
    case Rule::ImpI:
      out += " " + d.label + " " + brackets(d.mf);
      kid(0);
      out += nl(indent + 1) + braces(d.sf);
      break;
    case Rule::BotE:
      kid(0);
      out += nl(indent + 1) + brackets(d.mf) + " " + braces(d.sf);
      break;
    case Rule::ForallI:
      out += " " + d.var;
      if (d.var2 != d.var) out += " " + d.var2;
      kid(0);
      out += nl(indent + 1) + braces(d.sf);
      break;
    case Rule::ForallE:
      kid(0);
      out += nl(indent + 1) + to_string(*d.term);
      break;
    case Rule::ExistsI:
      out += " " + d.var + " " + brackets(d.mf) + " " + to_string(*d.term);
      kid(0);
      break;
    case Rule::ExistsE:
      kid(0);
      out += nl(indent + 1) + d.var + " " + d.label;
      kid(1);
      break;
    case Rule::Cons:
      out += " " + braces(d.sf) + " " + hints_string(d.hints);
      kid(0);
      out += nl(indent + 1) + hints_string(d.hints2) + " " + braces(d.sf2);
      break;
    case Rule::Cond:
      out += " " + braces(d.sf) + " " + braces(d.sf2) + " " + hints_string(d.hints);
      kid(0);
      kid(1);
      break;
    case Rule::SAxiom:
      out += " " + d.name + binding_string(d.sax.terms);
      for (const auto& [k, v] : d.sax.formulas) out += " " + k + " := {" + to_string(v) + "}";
      break;
    case Rule::EqRefl:
    case Rule::SuccNonzero:
      out += " " + to_string(*d.term) + " " + braces(d.sf);
      break;
    case Rule::Ext:
      out += " " + d.var + " " + brackets(d.mf) + " " + braces(d.sf);
      kid(0);
      kid(1);
      break;
    case Rule::DefEq:
      out += " " + d.name;
      for (const auto& a : d.args) out += " " + to_string(a);
      out += " " + braces(d.sf);
      break;
    case Rule::Ind:
      out += " " + d.var + " " + d.label + " " + brackets(d.mf) + " " + braces(d.sf);
      kid(0);
      kid(1);
      break;
    case Rule::While:
      out += " " + d.var + " " + d.label + " " + brackets(d.mf) + " " + d.var2 + " " + braces(d.sf);
      kid(0);
      kid(1);
      kid(2);
      break;
  }
  out += ")";
}

}  // namespace

// ---------------------------------------------------------------------------
// Public entry points
// ---------------------------------------------------------------------------

Document parse_document(std::string_view text, const std::string& file, const fs::path& dir, Document base) {
  Document doc = std::move(base);
  if (std::find(doc.files.begin(), doc.files.end(), file) == doc.files.end()) doc.files.push_back(file);
  Parser p(text, file, doc.theory, &doc, dir);
  p.document();
  return doc;
}

Document load_document(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::error_code ec;
  fs::path canon = fs::weakly_canonical(path, ec);
  Document doc;
  doc.files.push_back(ec ? path.string() : canon.string());
  std::string text = buf.str();
  Parser p(text, path.string(), doc.theory, &doc, path.parent_path());
  p.document();
  return doc;
}

Term parse_term(std::string_view text, const Theory& th) {
  return parse_phrase<Term>(text, th, [](Parser& p) { return p.term(false); });
}
StateFormula parse_state_formula(std::string_view text, const Theory& th) {
  return parse_phrase<StateFormula>(text, th, [](Parser& p) { return p.sf(); });
}
MainFormula parse_main_formula(std::string_view text, const Theory& th) {
  return parse_phrase<MainFormula>(text, th, [](Parser& p) { return p.mf(); });
}
Triple parse_triple(std::string_view text, const Theory& th) {
  return parse_phrase<Triple>(text, th, [](Parser& p) { return p.triple(); });
}
StateSequent parse_state_sequent(std::string_view text, const Theory& th) {
  return parse_phrase<StateSequent>(text, th, [](Parser& p) { return p.state_sequent(); });
}
StType parse_type(std::string_view text) {
  Theory th;
  return parse_phrase<StType>(text, th, [](Parser& p) { return p.type(); });
}
StTerm parse_st(std::string_view text, const Theory& th) {
  return parse_phrase<StTerm>(text, th, [](Parser& p) { return p.st(); });
}
DerivPtr parse_derivation(std::string_view text, const Theory& th, const Document* doc) {
  return parse_phrase<DerivPtr>(text, th, [](Parser& p) { return p.deriv(); }, doc);
}

std::string print_derivation(const Derivation& d) {
  std::string out;
  print_deriv(d, 0, out);
  return out;
}

std::string print_st(const StTerm& t) { return to_string(t, StPrintOptions{Notation::Ascii, true}); }

std::string print_theory(const Theory& th) {
  std::string out;
  const bool sa = th.sig.mode == Mode::SA;
  if (sa) out += "mode sa\n";
  if (!th.model.empty()) out += "model " + th.model + "\n";
  for (const auto& [f, n] : th.sig.functions)
    if (!sa || !sa_builtin_functions().count(f)) out += "func " + f + " " + std::to_string(n) + "\n";
  if (!sa && !th.sig.canonical_constant.empty()) out += "canonical " + th.sig.canonical_constant + "\n";
  for (const auto& [p, n] : th.sig.predicates)
    if (!sa || p != "eq") out += "pred " + p + " " + std::to_string(n) + "\n";
  for (const auto& [p, n] : th.sig.state_predicates) out += "statepred " + p + " " + std::to_string(n) + "\n";
  for (const auto& [c, t] : th.constants) out += "constant " + c + " : " + to_string(t) + "\n";
  for (const auto& e : th.equations) {
    if (sa && sa_builtin_equations().count(e.name)) continue;
    out += "equation " + e.name + "(";
    for (std::size_t i = 0; i < e.vars.size(); ++i) out += (i ? ", " : "") + e.vars[i];
    out += "): " + to_string(e.lhs) + " = " + to_string(e.rhs) + "\n";
  }
  auto metavars = [](const std::vector<MetaVar>& mvs) {
    std::string s;
    for (std::size_t i = 0; i < mvs.size(); ++i) {
      s += (i ? ", " : "") + mvs[i].name;
      if (!mvs[i].domain.empty()) s += ":{" + term_list(mvs[i].domain) + "}";
    }
    return s;
  };
  for (const auto& h : th.haxioms) {
    out += "haxiom " + h.name;
    if (!h.metavars.empty()) out += "(" + metavars(h.metavars) + ")";
    out += ": " + state_sequent_string(h.hyps, h.goal) + "\n";
  }
  for (const auto& s : th.saxioms) {
    out += "saxiom " + s.name;
    if (!s.term_metavars.empty() || !s.formula_metavars.empty()) {
      out += "(" + metavars(s.term_metavars);
      if (!s.formula_metavars.empty()) {
        out += "; ";
        for (std::size_t i = 0; i < s.formula_metavars.size(); ++i) {
          const auto& f = s.formula_metavars[i];
          out += (i ? ", " : "") + f.name;
          if (f.shape == FormulaMetaVar::Shape::Conj) {
            out += ": conj(";
            for (std::size_t j = 0; j < f.preds.size(); ++j) out += (j ? ", " : "") + f.preds[j];
            if (!f.arg_domain.empty()) out += "; " + term_list(f.arg_domain);
            out += ")";
          }
        }
      }
      out += ")";
    }
    std::string post = s.swap_post ? s.swap_post->formula + "[" + s.swap_post->l + " <-> " + s.swap_post->lp + "]"
                                   : to_string(s.pattern.post);
    out += ": {" + to_string(s.pattern.pre) + "} " + to_string(s.pattern.body) + " {" + post + "}";
    if (s.realizer)
      out += " realizer " + print_st(*s.realizer) + "\n";
    else
      out += " by " + s.builder + "\n";
  }
  return out;
}

std::string print_document(const Document& doc) {
  std::string out = print_theory(doc.theory);
  for (const auto& p : doc.proofs) {
    out += "\n" + std::string(p.pl ? "plproof " : "proof ") + p.name;
    if (p.goal || p.pl_goal) {
      out += ": ";
      for (std::size_t i = 0; i < p.ctx.entries().size(); ++i)
        out += (i ? ", " : "") + p.ctx.entries()[i].label + ": " + to_string(p.ctx.entries()[i].formula);
      out += p.ctx.empty() ? "|- " : " |- ";
      out += p.pl ? to_string(*p.pl_goal) : to_string(*p.goal);
    }
    out += "\n" + print_derivation(*p.deriv) + "\n";
  }
  return out;
}

}  // namespace hx
