#include "msa/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace msa {

struct Term::Node {
  Op op;
  Index i = 0;
  Index j = 0;
  std::string name;
  std::vector<Term> kids;
  std::size_t hash = 0;
  std::size_t size = 1;
  int modal_depth = 0;
  Index max_index = -1;
};

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

Term make_node(Op op, Index i, Index j, std::string name, std::vector<Term> kids) {
  auto n = std::make_shared<Term::Node>();
  n->op = op;
  n->i = i;
  n->j = j;
  n->name = std::move(name);
  n->kids = std::move(kids);
  std::size_t h = mix(0x51ed27, static_cast<std::size_t>(op));
  h = mix(h, static_cast<std::size_t>(i));
  h = mix(h, static_cast<std::size_t>(j));
  if (op == Op::Gen) h = mix(h, fnv1a(n->name));
  if (op == Op::Cyl) n->max_index = i;
  if (op == Op::Subst) n->max_index = std::max(i, j);
  for (const Term& k : n->kids) {
    h = mix(h, k.hash());
    n->size += k.size();
    n->modal_depth = std::max(n->modal_depth, k.modal_depth());
    n->max_index = std::max(n->max_index, k.max_index());
  }
  if (op == Op::Box) n->modal_depth += 1;
  n->hash = h;
  return Term(std::move(n));
}

namespace {

const Term& zero_singleton() {
  static const Term t = make_node(Op::Zero, 0, 0, {}, {});
  return t;
}

const Term& one_singleton() {
  static const Term t = make_node(Op::One, 0, 0, {}, {});
  return t;
}

}  // namespace

Term::Term() : Term(zero_singleton()) {}

Op Term::op() const { return node_->op; }
std::size_t Term::arity() const { return node_->kids.size(); }
const Term& Term::arg(std::size_t i) const { return node_->kids.at(i); }
Index Term::index() const { return node_->i; }
Index Term::over() const { return node_->i; }
Index Term::from() const { return node_->j; }
const std::string& Term::name() const { return node_->name; }
std::size_t Term::hash() const { return node_->hash; }
std::size_t Term::size() const { return node_->size; }
int Term::modal_depth() const { return node_->modal_depth; }
Index Term::max_index() const { return node_->max_index; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size()) return false;
  return (a <=> b) == 0;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (auto c = x.op <=> y.op; c != 0) return c;
  if (auto c = x.i <=> y.i; c != 0) return c;
  if (auto c = x.j <=> y.j; c != 0) return c;
  if (auto c = x.name.compare(y.name) <=> 0; c != 0) return c;
  for (std::size_t k = 0; k < x.kids.size(); ++k) {
    if (auto c = x.kids[k] <=> y.kids[k]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

Term zero() { return zero_singleton(); }
Term one() { return one_singleton(); }
Term neg(Term t) { return make_node(Op::Not, 0, 0, {}, {std::move(t)}); }
Term lor(Term a, Term b) { return make_node(Op::Or, 0, 0, {}, {std::move(a), std::move(b)}); }
Term land(Term a, Term b) { return make_node(Op::And, 0, 0, {}, {std::move(a), std::move(b)}); }
Term box(Term t) { return make_node(Op::Box, 0, 0, {}, {std::move(t)}); }

Term cyl(Index i, Term t) {
  if (i < 0) throw Error("negative index " + std::to_string(i));
  return make_node(Op::Cyl, i, 0, {}, {std::move(t)});
}

Term subst(Index over, Index from, Term t) {
  if (over < 0 || from < 0) throw Error("negative index in substitution");
  return make_node(Op::Subst, over, from, {}, {std::move(t)});
}

Term gen(std::string name) { return make_node(Op::Gen, 0, 0, std::move(name), {}); }

Term dia(Term t) { return neg(box(neg(std::move(t)))); }
Term qall(Index i, Term t) { return neg(cyl(i, neg(std::move(t)))); }
Term imp(Term a, Term b) { return lor(neg(std::move(a)), std::move(b)); }

Term conj(const std::vector<Term>& ts) {
  if (ts.empty()) return one();
  Term acc = ts.back();
  for (std::size_t k = ts.size() - 1; k-- > 0;) acc = land(ts[k], acc);
  return acc;
}

Term disj(const std::vector<Term>& ts) {
  if (ts.empty()) return zero();
  Term acc = ts.back();
  for (std::size_t k = ts.size() - 1; k-- > 0;) acc = lor(ts[k], acc);
  return acc;
}

bool is_dia(const Term& t) {
  return t.op() == Op::Not && t.arg().op() == Op::Box && t.arg().arg().op() == Op::Not;
}

bool is_qall(const Term& t) {
  return t.op() == Op::Not && t.arg().op() == Op::Cyl && t.arg().arg().op() == Op::Not;
}

bool is_propositional(const Term& t) {
  if (t.op() == Op::Cyl || t.op() == Op::Subst) return false;
  for (std::size_t k = 0; k < t.arity(); ++k) {
    if (!is_propositional(t.arg(k))) return false;
  }
  return true;
}

namespace {

void collect_generators(const Term& t, std::set<std::string>& out) {
  if (t.op() == Op::Gen) {
    out.insert(t.name());
    return;
  }
  for (std::size_t k = 0; k < t.arity(); ++k) collect_generators(t.arg(k), out);
}

void collect_indices(const Term& t, IndexSet& out) {
  if (t.op() == Op::Cyl) out.insert(t.index());
  if (t.op() == Op::Subst) {
    out.insert(t.over());
    out.insert(t.from());
  }
  for (std::size_t k = 0; k < t.arity(); ++k) collect_indices(t.arg(k), out);
}

}  // namespace

std::set<std::string> generators(const Term& t) {
  std::set<std::string> out;
  collect_generators(t, out);
  return out;
}

IndexSet mentioned_indices(const Term& t) {
  IndexSet out;
  collect_indices(t, out);
  return out;
}

// ---------------------------------------------------------------------------
// Signature

void Signature::declare(const std::string& name, IndexSet dims) {
  for (Index i : dims) {
    if (i < 0) throw SignatureError("negative index in dimension set of " + name);
  }
  dims_[name] = std::move(dims);
}

bool Signature::declared(const std::string& name) const { return dims_.count(name) != 0; }

const IndexSet& Signature::dims(const std::string& name) const {
  auto it = dims_.find(name);
  if (it == dims_.end()) throw SignatureError("undeclared generator '" + name + "'");
  return it->second;
}

Signature Signature::merged(const Signature& other) const {
  Signature out = *this;
  for (const auto& [name, dims] : other.dims_) {
    auto it = out.dims_.find(name);
    if (it != out.dims_.end() && it->second != dims) {
      throw SignatureError("conflicting declarations for '" + name + "'");
    }
    out.dims_[name] = dims;
  }
  return out;
}

Signature parse_signature(std::string_view text) {
  Signature sig;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto colon = line.find(':');
    std::string head = line.substr(0, colon);
    head.erase(std::remove_if(head.begin(), head.end(), [](unsigned char c) { return std::isspace(c); }),
               head.end());
    if (colon == std::string::npos) {
      if (head.empty()) continue;
      throw ParseError("signature line missing ':'", lineno);
    }
    if (head.empty()) throw ParseError("signature line missing generator name", lineno);
    IndexSet dims;
    std::istringstream rest(line.substr(colon + 1));
    std::string tok;
    while (rest >> tok) {
      if (!std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); })) {
        throw ParseError("malformed index '" + tok + "' in signature", lineno);
      }
      dims.insert(std::stoi(tok));
    }
    sig.declare(head, std::move(dims));
  }
  return sig;
}

std::string to_string(const Signature& sig) {
  std::string out;
  for (const auto& [name, dims] : sig.entries()) {
    out += name + ":";
    for (Index i : dims) out += " " + std::to_string(i);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
  enum Kind { Open, Close, Atom, End } kind;
  std::string text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ >= s_.size()) return {Token::End, {}, pos_};
    char c = s_[pos_];
    if (c == '(') return {Token::Open, "(", pos_++};
    if (c == ')') return {Token::Close, ")", pos_++};
    std::size_t start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '(' &&
           s_[pos_] != ')') {
      ++pos_;
    }
    return {Token::Atom, std::string(s_.substr(start, pos_ - start)), start};
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  Parser(std::string_view text, const Signature* sig) : lex_(text), sig_(sig) { advance(); }

  Term parse_all() {
    Term t = term();
    if (tok_.kind != Token::End) throw ParseError("trailing input '" + tok_.text + "'", tok_.pos);
    return t;
  }

 private:
  void advance() { tok_ = lex_.next(); }

  Token expect_atom(const char* what) {
    if (tok_.kind != Token::Atom) throw ParseError(std::string("expected ") + what, tok_.pos);
    Token t = tok_;
    advance();
    return t;
  }

  void expect_close() {
    if (tok_.kind != Token::Close) throw ParseError("expected ')'", tok_.pos);
    advance();
  }

  Index nat() {
    Token t = expect_atom("index");
    if (t.text.empty() || !std::all_of(t.text.begin(), t.text.end(), [](unsigned char c) { return std::isdigit(c); })) {
      throw ParseError("negative or malformed index '" + t.text + "'", t.pos);
    }
    if (t.text.size() > 9) throw ParseError("index too large '" + t.text + "'", t.pos);
    return std::stoi(t.text);
  }

  Term term() {
    if (tok_.kind == Token::Atom) {
      Token t = tok_;
      advance();
      if (t.text == "T") return one();
      if (t.text == "F") return zero();
      throw ParseError("unexpected atom '" + t.text + "'", t.pos);
    }
    if (tok_.kind != Token::Open) throw ParseError("expected term", tok_.pos);
    advance();
    Token head = expect_atom("operator");
    const std::string& h = head.text;
    Term out;
    if (h == "g") {
      Token name = expect_atom("generator name");
      if (sig_ != nullptr && !sig_->declared(name.text)) {
        throw SignatureError("undeclared generator '" + name.text + "' at " + std::to_string(name.pos));
      }
      out = gen(name.text);
    } else if (h == "not") {
      out = neg(term());
    } else if (h == "or") {
      Term a = term();
      out = lor(std::move(a), term());
    } else if (h == "and") {
      Term a = term();
      out = land(std::move(a), term());
    } else if (h == "imp") {
      Term a = term();
      out = imp(std::move(a), term());
    } else if (h == "box") {
      out = box(term());
    } else if (h == "dia") {
      out = dia(term());
    } else if (h == "c") {
      Index i = nat();
      out = cyl(i, term());
    } else if (h == "q") {
      Index i = nat();
      out = qall(i, term());
    } else if (h == "s") {
      Index u = nat();
      Index l = nat();
      out = subst(u, l, term());
    } else {
      throw ParseError("unknown operator '" + h + "'", head.pos);
    }
    expect_close();
    return out;
  }

  Lexer lex_;
  const Signature* sig_;
  Token tok_{Token::End, {}, 0};
};

void print_raw(const Term& t, std::string& out) {
  switch (t.op()) {
    case Op::Zero: out += "F"; return;
    case Op::One: out += "T"; return;
    case Op::Gen: out += "(g " + t.name() + ")"; return;
    case Op::Not: out += "(not "; break;
    case Op::Or: out += "(or "; break;
    case Op::And: out += "(and "; break;
    case Op::Box: out += "(box "; break;
    case Op::Cyl: out += "(c " + std::to_string(t.index()) + " "; break;
    case Op::Subst: out += "(s " + std::to_string(t.over()) + " " + std::to_string(t.from()) + " "; break;
  }
  for (std::size_t k = 0; k < t.arity(); ++k) {
    if (k > 0) out += ' ';
    print_raw(t.arg(k), out);
  }
  out += ')';
}

void print_sugar(const Term& t, std::string& out) {
  if (is_dia(t)) {
    out += "(dia ";
    print_sugar(t.arg().arg().arg(), out);
    out += ')';
    return;
  }
  if (is_qall(t)) {
    out += "(q " + std::to_string(t.arg().index()) + " ";
    print_sugar(t.arg().arg().arg(), out);
    out += ')';
    return;
  }
  if (t.op() == Op::Or && t.arg(0).op() == Op::Not && !is_dia(t.arg(0)) && !is_qall(t.arg(0))) {
    out += "(imp ";
    print_sugar(t.arg(0).arg(), out);
    out += ' ';
    print_sugar(t.arg(1), out);
    out += ')';
    return;
  }
  switch (t.op()) {
    case Op::Zero:
    case Op::One:
    case Op::Gen: print_raw(t, out); return;
    case Op::Not: out += "(not "; break;
    case Op::Or: out += "(or "; break;
    case Op::And: out += "(and "; break;
    case Op::Box: out += "(box "; break;
    case Op::Cyl: out += "(c " + std::to_string(t.index()) + " "; break;
    case Op::Subst: out += "(s " + std::to_string(t.over()) + " " + std::to_string(t.from()) + " "; break;
  }
  for (std::size_t k = 0; k < t.arity(); ++k) {
    if (k > 0) out += ' ';
    print_sugar(t.arg(k), out);
  }
  out += ')';
}

}  // namespace

Term parse(std::string_view text, const Signature& sig) { return Parser(text, &sig).parse_all(); }
Term parse_unchecked(std::string_view text) { return Parser(text, nullptr).parse_all(); }

std::string print(const Term& t) {
  std::string out;
  print_raw(t, out);
  return out;
}

std::string pretty(const Term& t) {
  std::string out;
  print_sugar(t, out);
  return out;
}

// ---------------------------------------------------------------------------
// Dimension sets

IndexSet free_indices(const Term& t, const Signature& sig) {
  switch (t.op()) {
    case Op::Zero:
    case Op::One: return {};
    case Op::Gen: return sig.dims(t.name());
    case Op::Not:
    case Op::Box: return free_indices(t.arg(), sig);
    case Op::Or:
    case Op::And: {
      IndexSet a = free_indices(t.arg(0), sig);
      IndexSet b = free_indices(t.arg(1), sig);
      a.insert(b.begin(), b.end());
      return a;
    }
    case Op::Cyl: {
      IndexSet a = free_indices(t.arg(), sig);
      a.erase(t.index());
      return a;
    }
    case Op::Subst: {
      IndexSet a = free_indices(t.arg(), sig);
      if (a.erase(t.over()) != 0) a.insert(t.from());
      return a;
    }
  }
  return {};
}

bool in_neat_reduct(const Term& t, Index cutoff, const Signature& sig) {
  IndexSet fv = free_indices(t, sig);
  return fv.empty() || *fv.rbegin() < cutoff;
}

// ---------------------------------------------------------------------------
// Fresh indices

Index IndexSupply::fresh(const IndexSet& avoid) {
  Index i = next_;
  while (avoid.count(i) != 0 || reserved_.count(i) != 0) ++i;
  next_ = i + 1;
  issued_.push_back(i);
  return i;
}

void IndexSupply::reserve(const IndexSet& indices) {
  for (Index i : indices) {
    if (i >= next_) reserved_.insert(i);
  }
}

Index fresh_index(IndexSupply& supply, const IndexSet& avoid) { return supply.fresh(avoid); }

}  // namespace msa

namespace msa {

namespace {

Term random_leaf(std::mt19937_64& rng, const std::vector<std::string>& gens) {
  const std::size_t n = gens.size() + 2;
  const std::size_t pick = static_cast<std::size_t>(rng() % (gens.empty() ? 2 : n + gens.size()));
  if (pick == 0) return zero();
  if (pick == 1) return one();
  return gen(gens[(pick - 2) % gens.size()]);
}

Term random_rec(std::mt19937_64& rng, const std::vector<std::string>& gens, const RandomTermOptions& opts,
                int depth) {
  if (depth <= 0 || rng() % 5 == 0) return random_leaf(rng, gens);
  std::vector<Op> ops{Op::Not, Op::Or, Op::And};
  if (opts.modal) ops.push_back(Op::Box);
  if (opts.quantifiers) {
    ops.push_back(Op::Cyl);
    ops.push_back(Op::Subst);
  }
  auto index = [&] { return static_cast<Index>(rng() % static_cast<std::uint64_t>(opts.max_index + 1)); };
  switch (ops[rng() % ops.size()]) {
    case Op::Not: return neg(random_rec(rng, gens, opts, depth - 1));
    case Op::Or: {
      Term a = random_rec(rng, gens, opts, depth - 1);
      return lor(a, random_rec(rng, gens, opts, depth - 1));
    }
    case Op::And: {
      Term a = random_rec(rng, gens, opts, depth - 1);
      return land(a, random_rec(rng, gens, opts, depth - 1));
    }
    case Op::Box: return box(random_rec(rng, gens, opts, depth - 1));
    case Op::Cyl: {
      Index i = index();
      return cyl(i, random_rec(rng, gens, opts, depth - 1));
    }
    default: {
      Index u = index();
      Index l = index();
      return subst(u, l, random_rec(rng, gens, opts, depth - 1));
    }
  }
}

}  // namespace

Term random_term(std::mt19937_64& rng, const Signature& sig, const RandomTermOptions& opts) {
  std::vector<std::string> gens = opts.generators;
  if (gens.empty()) {
    for (const auto& [name, dims] : sig.entries()) gens.push_back(name);
  }
  return random_rec(rng, gens, opts, opts.depth);
}

}  // namespace msa
