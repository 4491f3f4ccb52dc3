#include "partrace/generator.hpp"

#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace partrace {

FamilyKind parse_family(const std::string& name) {
  if (name == "branches") return FamilyKind::Branches;
  if (name == "loops") return FamilyKind::Loops;
  if (name == "mixed") return FamilyKind::Mixed;
  throw std::invalid_argument("unknown family '" + name + "' (branches, loops, mixed)");
}

std::string to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::Branches:
      return "branches";
    case FamilyKind::Loops:
      return "loops";
    case FamilyKind::Mixed:
      return "mixed";
  }
  return "?";
}

namespace {

std::string indent(int depth) { return std::string(static_cast<std::size_t>(depth) * 2, ' '); }

void branch_block(std::ostringstream& out, int depth, int k, bool bug) {
  out << indent(depth) << "havoc x;\n"
      << indent(depth) << "if (x > " << k << ") {\n"
      << indent(depth + 1) << "x = x - " << k << ";\n"
      << indent(depth + 1) << "assert(x > " << (bug ? 1 : 0) << ");\n"
      << indent(depth) << "}\n";
}

void loop_block(std::ostringstream& out, int depth, int k, bool bug) {
  out << indent(depth) << "havoc x;\n"
      << indent(depth) << "if (x > 0) {\n"
      << indent(depth + 1) << "x = -x;\n"
      << indent(depth) << "} else {\n"
      << indent(depth + 1) << "while (x > -" << k << ") {\n"
      << indent(depth + 2) << "x = x - 1;\n"
      << indent(depth + 1) << "}\n"
      << indent(depth) << "}\n"
      << indent(depth) << "assert(x != " << (bug ? "-" + std::to_string(k) : "0") << ");\n";
}

}  // namespace

std::string gen_family(FamilyKind kind, int n, std::uint64_t seed, bool bug) {
  if (n < 1) throw std::invalid_argument("family size must be at least 1");
  std::mt19937_64 rng(seed);
  const int buggy = bug ? static_cast<int>(rng() % static_cast<std::uint64_t>(n)) : -1;

  std::vector<bool> loops(static_cast<std::size_t>(n), kind == FamilyKind::Loops);
  std::vector<int> bounds(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (kind == FamilyKind::Mixed) loops[i] = rng() % 2 == 0;
    // Distinct bounds keep one block's proof from covering another.
    bounds[i] = kind == FamilyKind::Mixed ? 3 + i * 7 + static_cast<int>(rng() % 5)
                                          : 5 + i * 3;
  }

  std::ostringstream out;
  out << "// " << to_string(kind) << " n=" << n << " seed=" << seed << (bug ? " bug" : "")
      << "\nint c;\nint x;\n";
  if (n > 1) out << "havoc c;\n";
  int depth = 0;
  for (int i = 0; i < n; ++i) {
    bool last = i + 1 == n;
    if (!last) out << indent(depth) << "if (c == " << i + 1 << ") {\n";
    int inner = last ? depth : depth + 1;
    if (loops[i]) loop_block(out, inner, bounds[i], i == buggy);
    else branch_block(out, inner, bounds[i], i == buggy);
    if (!last) {
      out << indent(depth) << "} else {\n";
      ++depth;
    }
  }
  for (int d = depth; d-- > 0;) out << indent(d) << "}\n";
  return out.str();
}

}  // namespace partrace
