#include "tsprover/theory.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace tsprover {

namespace {

enum class Tok { Ident, Nat, LParen, RParen, Comma, Dot, Colon, Less, Arrow, Iff, Plus, Minus, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

const std::set<std::string> kKeywords = {"theory", "function", "predicate", "order",
                                         "axiom",  "forall",   "exists",    "not",
                                         "and",    "or"};

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(tok_.line, tok_.col, msg); }

private:
  void advance() {
    skip_trivia();
    tok_ = {Tok::End, "", line_, col_};
    if (pos_ >= text_.size()) return;
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        take();
      tok_.kind = Tok::Ident;
      tok_.text = std::string(text_.substr(start, pos_ - start));
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) take();
      tok_.kind = Tok::Nat;
      tok_.text = std::string(text_.substr(start, pos_ - start));
      return;
    }
    if (text_.compare(pos_, 3, "<->") == 0) {
      tok_.kind = Tok::Iff;
      tok_.text = "<->";
      take(); take(); take();
      return;
    }
    if (text_.compare(pos_, 2, "->") == 0) {
      tok_.kind = Tok::Arrow;
      tok_.text = "->";
      take(); take();
      return;
    }
    switch (c) {
      case '(': tok_.kind = Tok::LParen; break;
      case ')': tok_.kind = Tok::RParen; break;
      case ',': tok_.kind = Tok::Comma; break;
      case '.': tok_.kind = Tok::Dot; break;
      case ':': tok_.kind = Tok::Colon; break;
      case '<': tok_.kind = Tok::Less; break;
      case '+': tok_.kind = Tok::Plus; break;
      case '-': tok_.kind = Tok::Minus; break;
      default:
        throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
    }
    tok_.text = std::string(1, c);
    take();
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') take();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        take();
      } else {
        break;
      }
    }
  }

  void take() {
    if (text_[pos_] == '\n') {
      line_++;
      col_ = 1;
    } else {
      col_++;
    }
    pos_++;
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_{Tok::End, "", 1, 1};
};

/// Resolves identifiers while parsing formulas. Axioms bind variables with
/// quantifiers; exercises promote unknown nullary identifiers to variables.
struct Resolver {
  const Theory* theory = nullptr;
  const std::vector<Symbol>* skolems = nullptr;
  bool implicit_variables = false;
  std::vector<std::string> bound;

  const Symbol* find_skolem(const std::string& n) const {
    if (!skolems) return nullptr;
    for (const auto& s : *skolems)
      if (s.name == n) return &s;
    return nullptr;
  }
};

class FormulaParser {
public:
  FormulaParser(Lexer& lex, Resolver& res) : lex_(lex), res_(res) {}

  FOPtr parse_formula() { return parse_iff(); }

  TSFormula parse_atom_only() {
    TSFormula f = parse_atom();
    return f;
  }

  Term parse_term() {
    Token t = expect_ident("term");
    return resolve_term(t);
  }

private:
  FOPtr parse_iff() {
    FOPtr lhs = parse_implies();
    if (lex_.peek().kind == Tok::Iff) {
      lex_.next();
      return fo::iff(lhs, parse_iff());
    }
    return lhs;
  }

  FOPtr parse_implies() {
    FOPtr lhs = parse_or();
    if (lex_.peek().kind == Tok::Arrow) {
      lex_.next();
      return fo::implies(lhs, parse_implies());
    }
    return lhs;
  }

  FOPtr parse_or() {
    FOPtr lhs = parse_and();
    while (lex_.peek().kind == Tok::Ident && lex_.peek().text == "or") {
      lex_.next();
      lhs = fo::disj(lhs, parse_and());
    }
    return lhs;
  }

  FOPtr parse_and() {
    FOPtr lhs = parse_unary();
    while (lex_.peek().kind == Tok::Ident && lex_.peek().text == "and") {
      lex_.next();
      lhs = fo::conj(lhs, parse_unary());
    }
    return lhs;
  }

  FOPtr parse_unary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Ident && t.text == "not") {
      lex_.next();
      return fo::neg(parse_unary());
    }
    if (t.kind == Tok::Ident && (t.text == "forall" || t.text == "exists")) {
      return parse_quantifier();
    }
    if (t.kind == Tok::LParen) {
      lex_.next();
      FOPtr inner = parse_formula();
      expect(Tok::RParen, "')'");
      return inner;
    }
    return fo::atom(parse_atom());
  }

  FOPtr parse_quantifier() {
    Token q = lex_.next();
    bool universal = q.text == "forall";
    std::vector<std::string> vars;
    while (lex_.peek().kind == Tok::Ident && !kKeywords.count(lex_.peek().text)) {
      Token v = lex_.next();
      if (res_.theory &&
          (res_.theory->find_function(v.text) || res_.theory->find_predicate(v.text)))
        throw ParseError(v.line, v.col,
                         "bound variable '" + v.text + "' shadows a declared symbol");
      if (std::find(res_.bound.begin(), res_.bound.end(), v.text) != res_.bound.end() ||
          std::find(vars.begin(), vars.end(), v.text) != vars.end())
        throw ParseError(v.line, v.col, "variable '" + v.text + "' is already bound");
      vars.push_back(v.text);
    }
    if (vars.empty()) lex_.fail("expected at least one bound variable");
    expect(Tok::Dot, "'.'");
    for (const auto& v : vars) res_.bound.push_back(v);
    FOPtr body = parse_formula();  // quantifier scope is maximal
    for (size_t i = 0; i < vars.size(); i++) res_.bound.pop_back();
    for (auto it = vars.rbegin(); it != vars.rend(); ++it)
      body = universal ? fo::forall(object_var(*it), body) : fo::exists(object_var(*it), body);
    return body;
  }

  TSFormula parse_atom() {
    Token name = expect_ident("predicate symbol");
    const Symbol* pred = res_.theory ? res_.theory->find_predicate(name.text) : nullptr;
    if (!pred)
      throw ParseError(name.line, name.col, "undeclared predicate '" + name.text + "'");
    std::vector<Term> args = parse_args();
    if (static_cast<int>(args.size()) != pred->arity)
      throw ParseError(name.line, name.col,
                       "predicate '" + name.text + "' expects " + std::to_string(pred->arity) +
                           " argument(s), got " + std::to_string(args.size()));
    return TSFormula{*pred, std::move(args)};
  }

  std::vector<Term> parse_args() {
    std::vector<Term> args;
    expect(Tok::LParen, "'('");
    args.push_back(parse_term());
    while (lex_.peek().kind == Tok::Comma) {
      lex_.next();
      args.push_back(parse_term());
    }
    expect(Tok::RParen, "')'");
    return args;
  }

  Term resolve_term(const Token& name) {
    bool applied = lex_.peek().kind == Tok::LParen;
    if (applied) {
      std::vector<Term> args = parse_args();
      if (const Symbol* sk = res_.find_skolem(name.text)) {
        if (static_cast<int>(args.size()) != sk->arity)
          throw ParseError(name.line, name.col, "skolem symbol arity mismatch");
        return Term{*sk, std::move(args)};
      }
      const Symbol* fn = res_.theory ? res_.theory->find_function(name.text) : nullptr;
      if (!fn) {
        if (std::find(res_.bound.begin(), res_.bound.end(), name.text) != res_.bound.end())
          throw ParseError(name.line, name.col,
                           "variable '" + name.text + "' cannot take arguments");
        throw ParseError(name.line, name.col, "undeclared function '" + name.text + "'");
      }
      if (static_cast<int>(args.size()) != fn->arity)
        throw ParseError(name.line, name.col,
                         "function '" + name.text + "' expects " + std::to_string(fn->arity) +
                             " argument(s), got " + std::to_string(args.size()));
      return Term{*fn, std::move(args)};
    }
    if (std::find(res_.bound.begin(), res_.bound.end(), name.text) != res_.bound.end())
      return Term{object_var(name.text)};
    if (const Symbol* sk = res_.find_skolem(name.text)) {
      if (sk->arity != 0) throw ParseError(name.line, name.col, "skolem symbol arity mismatch");
      return Term{*sk};
    }
    if (const Symbol* fn = res_.theory ? res_.theory->find_function(name.text) : nullptr) {
      if (fn->arity != 0)
        throw ParseError(name.line, name.col,
                         "function '" + name.text + "' expects " + std::to_string(fn->arity) +
                             " argument(s), got 0");
      return Term{*fn};
    }
    if (res_.implicit_variables) {
      if (name.text.rfind("sk_", 0) == 0)
        throw ParseError(name.line, name.col,
                         "'" + name.text + "' names a skolem symbol; skolem symbols cannot "
                         "appear in exercises");
      return Term{object_var(name.text)};
    }
    throw ParseError(name.line, name.col,
                     "unbound variable '" + name.text + "' (axioms must be closed)");
  }

  Token expect_ident(const std::string& what) {
    if (lex_.peek().kind != Tok::Ident) lex_.fail("expected " + what);
    Token t = lex_.next();
    if (kKeywords.count(t.text))
      throw ParseError(t.line, t.col, "unexpected keyword '" + t.text + "'");
    return t;
  }

  void expect(Tok kind, const std::string& what) {
    if (lex_.peek().kind != kind) lex_.fail("expected " + what);
    lex_.next();
  }

  Lexer& lex_;
  Resolver& res_;
};

}  // namespace

// --- Theory helpers -----------------------------------------------------------

const Symbol* Theory::find_function(std::string_view n) const {
  for (const auto& s : functions)
    if (s.name == n) return &s;
  return nullptr;
}

const Symbol* Theory::find_predicate(std::string_view n) const {
  for (const auto& s : predicates)
    if (s.name == n) return &s;
  return nullptr;
}

const Axiom* Theory::find_axiom(std::string_view n) const {
  for (const auto& a : axioms)
    if (a.name == n) return &a;
  return nullptr;
}

bool Theory::precedes(const Symbol& p, const Symbol& q) const {
  // breadth-first over the declared pairs
  std::vector<std::string> frontier = {p.name};
  std::set<std::string> seen = {p.name};
  while (!frontier.empty()) {
    std::vector<std::string> next;
    for (const auto& cur : frontier) {
      for (const auto& [a, b] : precedence) {
        if (a != cur) continue;
        if (b == q.name) return true;
        if (seen.insert(b).second) next.push_back(b);
      }
    }
    frontier = std::move(next);
  }
  return false;
}

// --- parsing ------------------------------------------------------------------

Theory parse_theory(std::string_view text) {
  Lexer lex(text);
  Theory th;

  auto expect_keyword = [&](const std::string& kw) {
    if (lex.peek().kind != Tok::Ident || lex.peek().text != kw)
      lex.fail("expected '" + kw + "'");
    lex.next();
  };
  auto expect_name = [&](const std::string& what) {
    if (lex.peek().kind != Tok::Ident) lex.fail("expected " + what);
    Token t = lex.next();
    if (kKeywords.count(t.text))
      throw ParseError(t.line, t.col, "'" + t.text + "' is a reserved word");
    return t;
  };

  expect_keyword("theory");
  th.name = expect_name("theory name").text;

  while (lex.peek().kind != Tok::End) {
    Token kw = lex.peek();
    if (kw.kind != Tok::Ident) lex.fail("expected a declaration");
    if (kw.text == "function" || kw.text == "predicate") {
      lex.next();
      Token name = expect_name("symbol name");
      if (name.text.rfind("sk_", 0) == 0)
        throw ParseError(name.line, name.col, "the prefix 'sk_' is reserved for skolem symbols");
      if (th.find_function(name.text) || th.find_predicate(name.text))
        throw ParseError(name.line, name.col, "symbol '" + name.text + "' is already declared");
      if (lex.peek().kind != Tok::Nat) lex.fail("expected arity");
      int arity = std::stoi(lex.next().text);
      SymbolKind kind = kw.text == "function" ? SymbolKind::Function : SymbolKind::Predicate;
      (kind == SymbolKind::Function ? th.functions : th.predicates)
          .push_back(Symbol{name.text, kind, arity});
    } else if (kw.text == "order") {
      lex.next();
      Token lhs = expect_name("predicate name");
      if (lex.peek().kind != Tok::Less) lex.fail("expected '<'");
      lex.next();
      Token rhs = expect_name("predicate name");
      for (const Token* t : {&lhs, &rhs})
        if (!th.find_predicate(t->text))
          throw ParseError(t->line, t->col, "undeclared predicate '" + t->text + "'");
      th.precedence.emplace_back(lhs.text, rhs.text);
    } else if (kw.text == "axiom") {
      lex.next();
      Token name = expect_name("axiom name");
      if (th.find_axiom(name.text))
        throw ParseError(name.line, name.col, "axiom '" + name.text + "' is already declared");
      if (lex.peek().kind != Tok::Colon) lex.fail("expected ':'");
      lex.next();
      Resolver res;
      res.theory = &th;
      FormulaParser parser(lex, res);
      th.axioms.push_back({name.text, parser.parse_formula()});
    } else {
      lex.fail("unknown declaration '" + kw.text + "'");
    }
  }

  auto violations = validate_theory(th);
  if (!violations.empty()) throw Error("invalid theory: " + violations.front());
  return th;
}

static std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Theory parse_theory_file(const std::string& path) { return parse_theory(read_file(path)); }

// --- validation ---------------------------------------------------------------

namespace {

void check_fo(const FOPtr& f, const Theory& th, std::vector<Symbol>& bound,
              std::vector<std::string>& out, const std::string& axname) {
  if (!f) {
    out.push_back("axiom " + axname + ": missing formula");
    return;
  }
  switch (f->kind) {
    case FOFormula::Kind::Bottom:
    case FOFormula::Kind::Top:
      out.push_back("axiom " + axname + ": axioms must not contain \xe2\x8a\xa5 or \xe2\x8a\xa4");
      return;
    case FOFormula::Kind::Atom: {
      const Symbol* pred = th.find_predicate(f->atom.predicate.name);
      if (!pred || pred->arity != f->atom.predicate.arity)
        out.push_back("axiom " + axname + ": undeclared predicate '" + f->atom.predicate.name + "'");
      std::vector<const Term*> stack;
      for (const auto& a : f->atom.args) stack.push_back(&a);
      while (!stack.empty()) {
        const Term* t = stack.back();
        stack.pop_back();
        if (t->head.kind == SymbolKind::ObjectVar) {
          if (std::find(bound.begin(), bound.end(), t->head) == bound.end())
            out.push_back("axiom " + axname + ": unbound variable '" + t->head.name + "'");
        } else if (t->head.kind == SymbolKind::Function) {
          const Symbol* fn = th.find_function(t->head.name);
          if (!fn || fn->arity != t->head.arity)
            out.push_back("axiom " + axname + ": undeclared function '" + t->head.name + "'");
        } else {
          out.push_back("axiom " + axname + ": symbol '" + t->head.name +
                        "' may not appear in an axiom");
        }
        for (const auto& a : t->args) stack.push_back(&a);
      }
      return;
    }
    case FOFormula::Kind::Not:
      check_fo(f->lhs, th, bound, out, axname);
      return;
    case FOFormula::Kind::ForAll:
    case FOFormula::Kind::Exists:
      bound.push_back(f->var);
      check_fo(f->lhs, th, bound, out, axname);
      bound.pop_back();
      return;
    default:
      check_fo(f->lhs, th, bound, out, axname);
      check_fo(f->rhs, th, bound, out, axname);
      return;
  }
}

}  // namespace

std::vector<std::string> validate_theory(const Theory& th) {
  std::vector<std::string> out;

  for (const auto& [a, b] : th.precedence) {
    if (!th.find_predicate(a) || !th.find_predicate(b)) {
      out.push_back("precedence pair " + a + " < " + b + " names an undeclared predicate");
    }
  }
  // irreflexivity of the transitive closure
  for (const auto& p : th.predicates) {
    if (th.precedes(p, p)) {
      out.push_back("precedence cycle through '" + p.name + "'");
      break;
    }
  }
  for (const auto& ax : th.axioms) {
    std::vector<Symbol> bound;
    check_fo(ax.formula, th, bound, out, ax.name);
  }
  return out;
}

// --- rendering ----------------------------------------------------------------

std::string render_theory(const Theory& th) {
  std::ostringstream out;
  out << "theory " << th.name << "\n\n";
  for (const auto& s : th.functions) out << "function " << s.name << " " << s.arity << "\n";
  for (const auto& s : th.predicates) out << "predicate " << s.name << " " << s.arity << "\n";
  for (const auto& [a, b] : th.precedence) out << "order " << a << " < " << b << "\n";
  for (const auto& ax : th.axioms) out << "axiom " << ax.name << ": " << to_string(ax.formula) << "\n";
  return out.str();
}

// --- exercises ------------------------------------------------------------------

std::vector<SignedFormula> parse_exercise(std::string_view text, const Theory& th) {
  std::vector<SignedFormula> out;
  std::istringstream lines{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    lineno++;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos) continue;

    for (const char* kw : {"forall", "exists", " and ", " or ", "not ", "->", "<->"}) {
      if (line.find(kw) != std::string::npos)
        throw Error("line " + std::to_string(lineno) +
                    ": exercises must be sets of signed theory-specific formulas "
                    "(no connectives or quantifiers); this exercise is outside the "
                    "scope of the method");
    }

    Sign sign;
    if (line[i] == '+')
      sign = Sign::Assert;
    else if (line[i] == '-')
      sign = Sign::Deny;
    else
      throw Error("line " + std::to_string(lineno) + ": expected '+' or '-' sign prefix");

    try {
      out.push_back({sign, parse_ts_formula(line.substr(i + 1), th)});
    } catch (const ParseError& e) {
      throw Error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<SignedFormula> parse_exercise_file(const std::string& path, const Theory& th) {
  return parse_exercise(read_file(path), th);
}

TSFormula parse_ts_formula(std::string_view text, const Theory& th,
                           const std::vector<Symbol>& skolems) {
  Lexer lex(text);
  Resolver res;
  res.theory = &th;
  res.skolems = &skolems;
  res.implicit_variables = true;
  FormulaParser parser(lex, res);
  TSFormula f = parser.parse_atom_only();
  if (lex.peek().kind != Tok::End) lex.fail("unexpected trailing input");
  return f;
}

}  // namespace tsprover
