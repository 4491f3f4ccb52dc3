#include "partrace/nfa.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "syntax.hpp"

namespace partrace {

// ---------------------------------------------------------------------------
// Trace

Trace::Trace(SymbolTablePtr symbols, std::vector<Symbol> ops)
    : symbols_(std::move(symbols)), ops_(std::move(ops)) {}

Trace Trace::extended(Symbol s) const {
  std::vector<Symbol> ops = ops_;
  ops.push_back(s);
  return Trace(symbols_, std::move(ops));
}

Trace Trace::concat(const Trace& suffix) const {
  std::vector<Symbol> ops = ops_;
  ops.insert(ops.end(), suffix.ops_.begin(), suffix.ops_.end());
  return Trace(symbols_ ? symbols_ : suffix.symbols_, std::move(ops));
}

bool Trace::is_prefix_of(const Trace& other) const {
  if (ops_.size() > other.ops_.size()) return false;
  if (symbols_ == other.symbols_) {
    return std::equal(ops_.begin(), ops_.end(), other.ops_.begin());
  }
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    if ((*this)[i].text() != other[i].text()) return false;
  }
  return true;
}

std::string Trace::text() const {
  std::string out;
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    if (i) out += ", ";
    out += (*this)[i].text();
  }
  return out;
}

std::uint64_t Trace::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    for (char c : (*this)[i].text()) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ULL;
    }
    h ^= 0xffU;
    h *= 1099511628211ULL;
  }
  return h;
}

bool operator==(const Trace& a, const Trace& b) {
  if (a.size() != b.size()) return false;
  return a.is_prefix_of(b);
}

bool operator<(const Trace& a, const Trace& b) {
  if (a.symbols_ == b.symbols_) return a.ops_ < b.ops_;
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = a[i].text().compare(b[i].text());
    if (c != 0) return c < 0;
  }
  return a.size() < b.size();
}

// ---------------------------------------------------------------------------
// Nfa / NfaBuilder

Nfa::Nfa(SymbolTablePtr symbols)
    : symbols_(std::move(symbols)),
      accepting_{false},
      names_{"q0"},
      origin_{0},
      outgoing_(1) {}

std::vector<State> Nfa::accepting_states() const {
  std::vector<State> out;
  for (State s = 0; s < num_states(); ++s) {
    if (accepting_[s]) out.push_back(s);
  }
  return out;
}

std::optional<State> Nfa::find_state(std::string_view name) const {
  for (State s = 0; s < num_states(); ++s) {
    if (names_[s] == name) return s;
  }
  return std::nullopt;
}

NfaBuilder::NfaBuilder(SymbolTablePtr symbols) : symbols_(std::move(symbols)) {}

State NfaBuilder::add_state(std::string name) {
  auto s = static_cast<State>(accepting_.size());
  accepting_.push_back(false);
  names_.push_back(name.empty() ? "q" + std::to_string(s) : std::move(name));
  origin_.push_back(s);
  return s;
}

void NfaBuilder::set_initial(State s) { initial_ = s; }

void NfaBuilder::set_accepting(State s, bool accepting) { accepting_.at(s) = accepting; }

void NfaBuilder::add_transition(State src, Symbol symbol, State dst) {
  if (src >= accepting_.size() || dst >= accepting_.size()) {
    throw std::out_of_range("transition endpoint is not a state");
  }
  std::string key;
  key.reserve(12);
  for (std::uint32_t v : {src, symbol, dst}) key.append(reinterpret_cast<const char*>(&v), sizeof v);
  if (!seen_.insert(std::move(key)).second) return;
  transitions_.push_back({src, symbol, dst});
}

void NfaBuilder::add_letter(Symbol s) { letters_.push_back(s); }

void NfaBuilder::set_origin(State s, State origin) { origin_.at(s) = origin; }

Nfa NfaBuilder::build() && {
  if (accepting_.empty()) return Nfa(symbols_);
  Nfa a(symbols_);
  a.initial_ = initial_;
  a.accepting_ = std::move(accepting_);
  a.names_ = std::move(names_);
  a.origin_ = std::move(origin_);
  a.outgoing_.assign(a.accepting_.size(), {});
  for (std::uint32_t i = 0; i < transitions_.size(); ++i) {
    a.outgoing_[transitions_[i].src].push_back(i);
    letters_.push_back(transitions_[i].symbol);
  }
  a.transitions_ = std::move(transitions_);
  std::sort(letters_.begin(), letters_.end());
  letters_.erase(std::unique(letters_.begin(), letters_.end()), letters_.end());
  a.alphabet_ = std::move(letters_);
  return a;
}

// ---------------------------------------------------------------------------
// Algorithms

bool accepts(const Nfa& a, const Trace& t) {
  std::vector<State> current{a.initial()};
  std::vector<bool> mark(a.num_states(), false);
  for (std::size_t i = 0; i < t.size(); ++i) {
    Symbol sym = t.ops()[i];
    if (t.symbols() != a.symbols()) {
      auto found = a.symbols()->find(t[i].text());
      if (!found) return false;
      sym = *found;
    }
    std::vector<State> next;
    std::fill(mark.begin(), mark.end(), false);
    for (State q : current) {
      for (auto idx : a.outgoing(q)) {
        const Transition& tr = a.transitions()[idx];
        if (tr.symbol == sym && !mark[tr.dst]) {
          mark[tr.dst] = true;
          next.push_back(tr.dst);
        }
      }
    }
    if (next.empty()) return false;
    current = std::move(next);
  }
  return std::any_of(current.begin(), current.end(),
                     [&](State q) { return a.is_accepting(q); });
}

std::optional<Trace> shortest_suffix_from(const Nfa& a, State from) {
  constexpr std::uint32_t kNone = UINT32_MAX;
  std::vector<std::uint32_t> parent_edge(a.num_states(), kNone);
  std::vector<bool> seen(a.num_states(), false);
  std::deque<State> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    State q = queue.front();
    queue.pop_front();
    if (a.is_accepting(q)) {
      std::vector<Symbol> ops;
      State cur = q;
      while (cur != from) {
        const Transition& tr = a.transitions()[parent_edge[cur]];
        ops.push_back(tr.symbol);
        cur = tr.src;
      }
      std::reverse(ops.begin(), ops.end());
      return Trace(a.symbols(), std::move(ops));
    }
    for (auto idx : a.outgoing(q)) {
      State d = a.transitions()[idx].dst;
      if (!seen[d]) {
        seen[d] = true;
        parent_edge[d] = idx;
        queue.push_back(d);
      }
    }
  }
  return std::nullopt;
}

std::optional<Trace> shortest_accepted(const Nfa& a) {
  return shortest_suffix_from(a, a.initial());
}

bool is_empty(const Nfa& a) { return !shortest_accepted(a).has_value(); }

Nfa trim(const Nfa& a) {
  const std::size_t n = a.num_states();
  std::vector<bool> fwd(n, false);
  std::deque<State> queue{a.initial()};
  fwd[a.initial()] = true;
  while (!queue.empty()) {
    State q = queue.front();
    queue.pop_front();
    for (auto idx : a.outgoing(q)) {
      State d = a.transitions()[idx].dst;
      if (!fwd[d]) {
        fwd[d] = true;
        queue.push_back(d);
      }
    }
  }
  std::vector<std::vector<State>> preds(n);
  for (const auto& t : a.transitions()) preds[t.dst].push_back(t.src);
  std::vector<bool> bwd(n, false);
  for (State s = 0; s < n; ++s) {
    if (a.is_accepting(s) && fwd[s]) {
      bwd[s] = true;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    State q = queue.front();
    queue.pop_front();
    for (State p : preds[q]) {
      if (!bwd[p] && fwd[p]) {
        bwd[p] = true;
        queue.push_back(p);
      }
    }
  }

  NfaBuilder b(a.symbols());
  for (Symbol s : a.alphabet()) b.add_letter(s);
  if (!bwd[a.initial()]) {
    State q = b.add_state(a.name(a.initial()));
    b.set_origin(q, a.origin(a.initial()));
    b.set_initial(q);
    return std::move(b).build();
  }
  std::vector<State> remap(n, UINT32_MAX);
  for (State s = 0; s < n; ++s) {
    if (bwd[s]) {
      remap[s] = b.add_state(a.name(s));
      b.set_origin(remap[s], a.origin(s));
      b.set_accepting(remap[s], a.is_accepting(s));
    }
  }
  b.set_initial(remap[a.initial()]);
  for (const auto& t : a.transitions()) {
    if (bwd[t.src] && bwd[t.dst]) b.add_transition(remap[t.src], t.symbol, remap[t.dst]);
  }
  return std::move(b).build();
}

namespace {

struct VectorHash {
  std::size_t operator()(const std::vector<State>& v) const noexcept {
    std::size_t h = v.size();
    for (State s : v) h = h * 1000003U ^ s;
    return h;
  }
};

struct PairHash {
  std::size_t operator()(std::pair<State, std::uint32_t> p) const noexcept {
    return (static_cast<std::size_t>(p.first) << 32) ^ p.second;
  }
};

// Lazily determinized view of the subtrahend.
class SubsetAutomaton {
 public:
  explicit SubsetAutomaton(const Nfa& b) : b_(b), by_symbol_(b.num_states()) {
    for (const auto& t : b.transitions()) by_symbol_[t.src][t.symbol].push_back(t.dst);
  }

  std::uint32_t intern(std::vector<State> subset) {
    auto it = ids_.find(subset);
    if (it != ids_.end()) return it->second;
    auto id = static_cast<std::uint32_t>(subsets_.size());
    bool acc = std::any_of(subset.begin(), subset.end(),
                           [&](State s) { return b_.is_accepting(s); });
    accepting_.push_back(acc);
    ids_.emplace(subset, id);
    subsets_.push_back(std::move(subset));
    return id;
  }

  std::uint32_t post(std::uint32_t id, Symbol sym) {
    std::uint64_t key = (static_cast<std::uint64_t>(id) << 32) | sym;
    auto it = post_cache_.find(key);
    if (it != post_cache_.end()) return it->second;
    std::vector<State> next;
    for (State s : subsets_[id]) {
      auto f = by_symbol_[s].find(sym);
      if (f != by_symbol_[s].end()) next.insert(next.end(), f->second.begin(), f->second.end());
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    std::uint32_t r = intern(std::move(next));
    post_cache_.emplace(key, r);
    return r;
  }

  bool accepting(std::uint32_t id) const { return accepting_[id]; }

 private:
  const Nfa& b_;
  std::vector<std::unordered_map<Symbol, std::vector<State>>> by_symbol_;
  std::unordered_map<std::vector<State>, std::uint32_t, VectorHash> ids_;
  std::vector<std::vector<State>> subsets_;
  std::vector<bool> accepting_;
  std::unordered_map<std::uint64_t, std::uint32_t> post_cache_;
};

}  // namespace

Nfa difference(const Nfa& a, const Nfa& b) {
  if (a.symbols() != b.symbols()) {
    throw std::invalid_argument("difference: operands use different symbol tables");
  }
  SubsetAutomaton det(b);
  NfaBuilder out(a.symbols());
  for (Symbol s : a.alphabet()) out.add_letter(s);

  std::unordered_map<std::pair<State, std::uint32_t>, State, PairHash> ids;
  std::vector<std::pair<State, std::uint32_t>> pairs;
  auto get = [&](State qa, std::uint32_t sb) {
    auto key = std::make_pair(qa, sb);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    State s = out.add_state();
    out.set_origin(s, qa);
    out.set_accepting(s, a.is_accepting(qa) && !det.accepting(sb));
    ids.emplace(key, s);
    pairs.push_back(key);
    return s;
  };

  State init = get(a.initial(), det.intern({b.initial()}));
  out.set_initial(init);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [qa, sb] = pairs[i];
    for (auto idx : a.outgoing(qa)) {
      const Transition& t = a.transitions()[idx];
      State dst = get(t.dst, det.post(sb, t.symbol));
      out.add_transition(static_cast<State>(i), t.symbol, dst);
    }
  }

  Nfa trimmed = trim(std::move(out).build());
  // Fresh sequential names after trimming.
  NfaBuilder renamed(trimmed.symbols());
  for (Symbol s : trimmed.alphabet()) renamed.add_letter(s);
  for (State s = 0; s < trimmed.num_states(); ++s) {
    State r = renamed.add_state();
    renamed.set_accepting(r, trimmed.is_accepting(s));
    renamed.set_origin(r, trimmed.origin(s));
  }
  renamed.set_initial(trimmed.initial());
  for (const auto& t : trimmed.transitions()) renamed.add_transition(t.src, t.symbol, t.dst);
  return std::move(renamed).build();
}

Nfa straight_line(const Trace& t) {
  NfaBuilder b(t.symbols());
  State cur = b.add_state();
  b.set_initial(cur);
  for (Symbol s : t.ops()) {
    State next = b.add_state();
    b.add_transition(cur, s, next);
    cur = next;
  }
  b.set_accepting(cur);
  return std::move(b).build();
}

bool structurally_equal(const Nfa& a, const Nfa& b) {
  if (a.num_states() != b.num_states()) return false;
  if (a.name(a.initial()) != b.name(b.initial())) return false;
  std::set<std::string> sa, sb;
  for (State s = 0; s < a.num_states(); ++s) {
    sa.insert(a.name(s) + (a.is_accepting(s) ? "!" : ""));
  }
  for (State s = 0; s < b.num_states(); ++s) {
    sb.insert(b.name(s) + (b.is_accepting(s) ? "!" : ""));
  }
  if (sa != sb) return false;
  auto edges = [](const Nfa& n) {
    std::set<std::string> out;
    for (const auto& t : n.transitions()) {
      out.insert(n.name(t.src) + "\n" + n.name(t.dst) + "\n" + (*n.symbols())[t.symbol].text());
    }
    return out;
  };
  auto letters = [](const Nfa& n) {
    std::set<std::string> out;
    for (Symbol s : n.alphabet()) out.insert((*n.symbols())[s].text());
    return out;
  };
  return edges(a) == edges(b) && letters(a) == letters(b);
}

// ---------------------------------------------------------------------------
// Text format

AutomatonFormatError::AutomatonFormatError(const std::string& message, int line)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

std::string format_operation(const Operation& op) {
  switch (op.kind()) {
    case OpKind::Assume:
      return "assume " + to_text(*op.expr());
    case OpKind::Assign:
      return "assign " + op.target() + " " + to_text(*op.expr());
    case OpKind::Havoc:
      return "havoc " + op.target();
  }
  return {};
}

Operation parse_operation(std::string_view text) {
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto word = [&] {
    skip_ws();
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    std::string w(text.substr(i, j - i));
    i = j;
    return w;
  };
  std::string kind = word();
  auto check_ident = [](const std::string& v) {
    if (v.empty() || detail::is_keyword(v) ||
        !(std::isalpha(static_cast<unsigned char>(v[0])) || v[0] == '_') ||
        !std::all_of(v.begin(), v.end(), [](char c) {
          return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
        })) {
      throw ParseError("invalid variable name '" + v + "'", {});
    }
  };
  if (kind == "assume") {
    return Operation::assume(parse_expression(text.substr(i), true));
  }
  if (kind == "assign") {
    std::string var = word();
    check_ident(var);
    return Operation::assign(var, parse_expression(text.substr(i), false));
  }
  if (kind == "havoc") {
    std::string var = word();
    check_ident(var);
    skip_ws();
    if (i != text.size()) throw ParseError("trailing text after havoc", {});
    return Operation::havoc(var);
  }
  throw ParseError("unknown operation kind '" + kind + "'", {});
}

std::string serialize(const Nfa& a, const std::map<State, std::string>& annotations) {
  std::ostringstream os;
  for (State s = 0; s < a.num_states(); ++s) os << "loc " << a.name(s) << "\n";
  os << "init " << a.name(a.initial()) << "\n";
  for (State s : a.accepting_states()) os << "error " << a.name(s) << "\n";
  std::set<Symbol> used;
  for (const auto& t : a.transitions()) {
    used.insert(t.symbol);
    os << "edge " << a.name(t.src) << " " << a.name(t.dst) << " "
       << format_operation((*a.symbols())[t.symbol]) << "\n";
  }
  for (Symbol s : a.alphabet()) {
    if (!used.contains(s)) os << "letter " << format_operation((*a.symbols())[s]) << "\n";
  }
  for (const auto& [s, text] : annotations) os << "annot " << a.name(s) << " " << text << "\n";
  return os.str();
}

ParsedAutomaton parse_automaton(std::string_view text) {
  auto table = std::make_shared<SymbolTable>();

  struct EdgeLine {
    std::string src, dst;
    Symbol symbol;
    int line;
  };
  std::vector<std::string> locs;
  std::unordered_map<std::string, State> loc_index;
  std::vector<std::pair<std::string, int>> inits, errors;
  std::vector<EdgeLine> edges;
  std::vector<Symbol> letters;
  std::vector<std::tuple<std::string, std::string, int>> annots;

  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string kw;
    if (!(ls >> kw)) continue;
    std::string rest;
    std::getline(ls, rest);
    std::istringstream rs(rest);
    auto take = [&](const char* what) {
      std::string w;
      if (!(rs >> w)) throw AutomatonFormatError(std::string("missing ") + what, lineno);
      return w;
    };
    auto remainder = [&] {
      std::string r;
      std::getline(rs, r);
      return r;
    };
    try {
      if (kw == "loc") {
        std::string id = take("location id");
        if (loc_index.contains(id)) {
          throw AutomatonFormatError("duplicate location '" + id + "'", lineno);
        }
        loc_index.emplace(id, static_cast<State>(locs.size()));
        locs.push_back(id);
      } else if (kw == "init") {
        inits.emplace_back(take("location id"), lineno);
      } else if (kw == "error") {
        errors.emplace_back(take("location id"), lineno);
      } else if (kw == "edge") {
        std::string src = take("source location");
        std::string dst = take("target location");
        Operation op = parse_operation(remainder());
        edges.push_back({src, dst, table->intern(op), lineno});
      } else if (kw == "letter") {
        letters.push_back(table->intern(parse_operation(remainder())));
      } else if (kw == "annot") {
        std::string id = take("location id");
        std::string body = remainder();
        auto b = body.find_first_not_of(" \t");
        annots.emplace_back(id, b == std::string::npos ? "" : body.substr(b), lineno);
      } else {
        throw AutomatonFormatError("unknown directive '" + kw + "'", lineno);
      }
    } catch (const ParseError& e) {
      throw AutomatonFormatError(e.what(), lineno);
    }
  }

  auto resolve = [&](const std::string& id, int line) {
    auto it = loc_index.find(id);
    if (it == loc_index.end()) {
      throw AutomatonFormatError("undeclared location '" + id + "'", line);
    }
    return it->second;
  };
  if (inits.size() != 1) {
    throw AutomatonFormatError("expected exactly one init line", inits.empty() ? lineno : inits[1].second);
  }

  SymbolTablePtr frozen = table;
  NfaBuilder b(frozen);
  for (const auto& l : locs) b.add_state(l);
  b.set_initial(resolve(inits[0].first, inits[0].second));
  for (const auto& [id, line] : errors) b.set_accepting(resolve(id, line));
  for (const auto& e : edges) {
    b.add_transition(resolve(e.src, e.line), e.symbol, resolve(e.dst, e.line));
  }
  for (Symbol s : letters) b.add_letter(s);
  ParsedAutomaton result{std::move(b).build(), {}};
  for (const auto& [id, body, line] : annots) result.annotations[resolve(id, line)] = body;
  return result;
}

}  // namespace partrace
