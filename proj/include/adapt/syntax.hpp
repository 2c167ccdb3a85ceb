#pragma once

// Concrete text syntax: parse and render calculus terms (.adapt) and
// Minsky-machine programs (.mm).
//
// Grammar:  par  := seq ("|" seq)*
//           seq  := "0" | NAME "[" par "]" | "(" par ")" | "@"
//                 | "!" prefix ["." seq] | prefix ["." seq]
//           sums := seq ("+" seq)*      (branches must be prefixed)
//           prefix := NAME | NAME "!" | NAME "{" par "}"
// "." binds tighter than "+", "+" tighter than "|". Line comments start with #.

#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "adapt/minsky.hpp"
#include "adapt/term.hpp"

namespace adapt {

struct SourceSpan {
  size_t start = 0;
  size_t end = 0;
  int line = 1;
  int col = 1;
};

struct ParseError : std::runtime_error {
  SourceSpan span;
  ParseError(const std::string& msg, SourceSpan s)
      : std::runtime_error(msg + " at line " + std::to_string(s.line) + ", column " +
                           std::to_string(s.col)),
        span(s) {}
};

namespace detail {

enum class Tok : uint8_t { Name, Bang, Dot, Plus, Bar, LPar, RPar, LBrk, RBrk, LBrc, RBrc, Zero, Hole, End };

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        ++pos_;
        ++line_;
        col_ = 1;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
        ++col_;
      } else {
        break;
      }
    }
    SourceSpan sp{pos_, pos_ + 1, line_, col_};
    if (pos_ >= src_.size()) {
      tok_ = Token{Tok::End, "", sp};
      return;
    }
    char c = src_[pos_];
    auto single = [&](Tok k) {
      ++pos_;
      ++col_;
      tok_ = Token{k, std::string(1, c), sp};
    };
    switch (c) {
      case '!': return single(Tok::Bang);
      case '.': return single(Tok::Dot);
      case '+': return single(Tok::Plus);
      case '|': return single(Tok::Bar);
      case '(': return single(Tok::LPar);
      case ')': return single(Tok::RPar);
      case '[': return single(Tok::LBrk);
      case ']': return single(Tok::RBrk);
      case '{': return single(Tok::LBrc);
      case '}': return single(Tok::RBrc);
      case '0': return single(Tok::Zero);
      case '@': return single(Tok::Hole);
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
              src_[pos_] == '$'))
        ++pos_;
      sp.end = pos_;
      std::string text = src_.substr(start, pos_ - start);
      col_ += static_cast<int>(pos_ - start);
      tok_ = Token{Tok::Name, std::move(text), sp};
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", sp);
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_{Tok::End, "", {}};
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  TermPtr parse() {
    auto t = parse_par();
    expect(Tok::End, "end of input");
    return t;
  }

 private:
  TermPtr parse_par() {
    std::vector<TermPtr> parts{parse_sums()};
    while (lex_.peek().kind == Tok::Bar) {
      lex_.next();
      parts.push_back(parse_sums());
    }
    return par(std::move(parts));
  }

  TermPtr parse_sums() {
    auto first = parse_seq();
    if (lex_.peek().kind != Tok::Plus) return first;
    std::vector<Branch> branches = as_branches(first, lex_.peek().span);
    while (lex_.peek().kind == Tok::Plus) {
      auto sp = lex_.next().span;
      auto b = as_branches(parse_seq(), sp);
      branches.insert(branches.end(), b.begin(), b.end());
    }
    return sum(std::move(branches));
  }

  std::vector<Branch> as_branches(const TermPtr& t, SourceSpan sp) {
    if (t->kind == Kind::Sum) return t->branches;
    throw ParseError("sum branches must be prefixed terms", sp);
  }

  TermPtr parse_seq() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::Zero: lex_.next(); return nil();
      case Tok::Hole: {
        auto tok = lex_.next();
        if (payload_depth_ == 0)
          throw ParseError("hole '@' outside an update payload", tok.span);
        return hole();
      }
      case Tok::LPar: {
        lex_.next();
        auto inner = parse_par();
        expect(Tok::RPar, "')'");
        return inner;
      }
      case Tok::Bang: {
        lex_.next();
        Prefix p = parse_prefix();
        return repl(std::move(p), parse_cont());
      }
      case Tok::Name: {
        Token name = lex_.next();
        check_name(name);
        if (lex_.peek().kind == Tok::LBrk) {
          lex_.next();
          auto body = parse_par();
          expect(Tok::RBrk, "']'");
          return loc(name.text, body);
        }
        Prefix p = parse_prefix_after_name(name);
        return act(std::move(p), parse_cont());
      }
      default:
        throw ParseError("expected a term", t.span);
    }
  }

  // continuation after a prefix: "." seq, defaulting to 0 when absent
  TermPtr parse_cont() {
    if (lex_.peek().kind == Tok::Dot) {
      lex_.next();
      return parse_seq();
    }
    return nil();
  }

  Prefix parse_prefix() {
    Token name = lex_.next();
    if (name.kind != Tok::Name) throw ParseError("expected a prefix name", name.span);
    check_name(name);
    return parse_prefix_after_name(name);
  }

  Prefix parse_prefix_after_name(const Token& name) {
    if (lex_.peek().kind == Tok::Bang) {
      lex_.next();
      return out(name.text);
    }
    if (lex_.peek().kind == Tok::LBrc) {
      lex_.next();
      ++payload_depth_;
      auto pat = parse_par();
      --payload_depth_;
      expect(Tok::RBrc, "'}'");
      return update(name.text, pat);
    }
    return in(name.text);
  }

  void check_name(const Token& name) {
    if (name.text == kErrName)
      throw ParseError("name 'err' is reserved for the dynamic encoding", name.span);
  }

  void expect(Tok k, const std::string& what) {
    if (lex_.peek().kind != k) throw ParseError("expected " + what, lex_.peek().span);
    lex_.next();
  }

  Lexer lex_;
  int payload_depth_ = 0;
};

}  // namespace detail

inline TermPtr parse_process(const std::string& text) { return detail::Parser(text).parse(); }

// ---- rendering -----------------------------------------------------------------

namespace detail {

inline void render_par(const TermPtr& t, std::string& out);

inline void render_prefix(const Prefix& p, std::string& out) {
  out += p.name;
  switch (p.kind) {
    case PrefixKind::In: break;
    case PrefixKind::Out: out += '!'; break;
    case PrefixKind::Update:
      out += '{';
      render_par(p.payload, out);
      out += '}';
      break;
  }
}

// seq position: parallel compositions and proper sums need parentheses
inline void render_seq(const TermPtr& t, std::string& out) {
  bool paren = t->kind == Kind::Par || (t->kind == Kind::Sum && t->branches.size() > 1);
  if (paren) out += '(';
  render_par(t, out);
  if (paren) out += ')';
}

inline void render_par(const TermPtr& t, std::string& out) {
  switch (t->kind) {
    case Kind::Nil: out += '0'; break;
    case Kind::Hole: out += '@'; break;
    case Kind::Loc:
      out += t->name;
      out += '[';
      render_par(t->body, out);
      out += ']';
      break;
    case Kind::Par:
      for (size_t i = 0; i < t->children.size(); ++i) {
        if (i) out += " | ";
        if (t->children[i]->kind == Kind::Par) {
          out += '(';
          render_par(t->children[i], out);
          out += ')';
        } else {
          render_par(t->children[i], out);
        }
      }
      break;
    case Kind::Sum:
      for (size_t i = 0; i < t->branches.size(); ++i) {
        if (i) out += " + ";
        render_prefix(t->branches[i].prefix, out);
        out += '.';
        render_seq(t->branches[i].cont, out);
      }
      break;
    case Kind::Repl:
      out += '!';
      render_prefix(t->prefix, out);
      out += '.';
      render_seq(t->body, out);
      break;
  }
}

}  // namespace detail

// Canonical text form; parse(render(t)) is structurally congruent to t.
inline std::string render(const TermPtr& t) {
  std::string s;
  detail::render_par(canonicalize(t), s);
  return s;
}

// ---- Minsky machine files ---------------------------------------------------------

inline MinskyMachine parse_mm(const std::string& text) {
  MinskyMachine m;
  std::istringstream ss(text);
  std::string line;
  int lineno = 0;
  std::vector<std::pair<int, Instr>> entries;
  bool seen_instr = false;
  while (std::getline(ss, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    SourceSpan sp{0, 0, lineno, 1};
    auto parse_reg = [&](const std::string& r) {
      if (r == "r0") return 0;
      if (r == "r1") return 1;
      throw ParseError("expected register r0 or r1, got '" + r + "'", sp);
    };
    if (first.rfind("r0=", 0) == 0 || first.rfind("r1=", 0) == 0) {
      if (seen_instr) throw ParseError("register header after instructions", sp);
      long v = 0;
      try {
        v = std::stol(first.substr(3));
      } catch (const std::exception&) {
        throw ParseError("bad register value in '" + first + "'", sp);
      }
      if (v < 0) throw ParseError("negative register value", sp);
      (first[1] == '0' ? m.init_r0 : m.init_r1) = v;
      continue;
    }
    // INDEX ":" instruction
    if (first.empty() || first.back() != ':') {
      if (first.size() && std::isdigit(static_cast<unsigned char>(first[0]))) {
        // allow "1 :" style? keep strict: require "1:"
        std::string colon;
        if (ls >> colon && colon == ":") {
          first += ':';
        } else {
          throw ParseError("expected 'INDEX:' before instruction", sp);
        }
      } else {
        throw ParseError("expected 'INDEX:' before instruction", sp);
      }
    }
    seen_instr = true;
    int idx = 0;
    try {
      idx = std::stoi(first.substr(0, first.size() - 1));
    } catch (const std::exception&) {
      throw ParseError("bad instruction index '" + first + "'", sp);
    }
    std::string opname;
    if (!(ls >> opname)) throw ParseError("missing instruction", sp);
    Instr ins;
    if (opname == "INC") {
      std::string r;
      if (!(ls >> r)) throw ParseError("INC needs a register", sp);
      ins = Instr{Op::Inc, parse_reg(r), 0};
    } else if (opname == "DECJ") {
      std::string r;
      int tgt;
      if (!(ls >> r >> tgt)) throw ParseError("DECJ needs a register and a target", sp);
      ins = Instr{Op::DecJ, parse_reg(r), tgt};
    } else if (opname == "HALT") {
      ins = Instr{Op::Halt, 0, 0};
    } else {
      throw ParseError("unknown instruction '" + opname + "'", sp);
    }
    std::string extra;
    if (ls >> extra) throw ParseError("trailing input '" + extra + "'", sp);
    entries.emplace_back(idx, ins);
  }
  if (entries.empty()) throw ParseError("no instructions", SourceSpan{0, 0, lineno, 1});
  m.instrs.resize(entries.size());
  std::vector<bool> seen(entries.size(), false);
  for (auto& [idx, ins] : entries) {
    if (idx < 1 || idx > static_cast<int>(entries.size()))
      throw ParseError("instruction index " + std::to_string(idx) + " outside 1.." +
                           std::to_string(entries.size()),
                       SourceSpan{});
    if (seen[static_cast<size_t>(idx - 1)])
      throw ParseError("duplicate instruction index " + std::to_string(idx), SourceSpan{});
    seen[static_cast<size_t>(idx - 1)] = true;
    m.instrs[static_cast<size_t>(idx - 1)] = ins;
  }
  validate_mm(m);
  return m;
}

inline std::string render_mm(const MinskyMachine& m) {
  std::string s;
  if (m.init_r0) s += "r0=" + std::to_string(m.init_r0) + "\n";
  if (m.init_r1) s += "r1=" + std::to_string(m.init_r1) + "\n";
  for (int i = 1; i <= m.size(); ++i) {
    const Instr& ins = m.at(i);
    s += std::to_string(i) + ": ";
    switch (ins.op) {
      case Op::Inc: s += "INC r" + std::to_string(ins.reg); break;
      case Op::DecJ: s += "DECJ r" + std::to_string(ins.reg) + " " + std::to_string(ins.target); break;
      case Op::Halt: s += "HALT"; break;
    }
    s += '\n';
  }
  return s;
}

}  // namespace adapt
