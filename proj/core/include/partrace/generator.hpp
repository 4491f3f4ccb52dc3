#pragma once

#include <cstdint>
#include <string>

namespace partrace {

enum class FamilyKind { Branches, Loops, Mixed };

/// Throws std::invalid_argument for unknown names.
FamilyKind parse_family(const std::string& name);
std::string to_string(FamilyKind k);

/// Synthetic program with `n` blocks behind a nondeterministic choice, so
/// each block's assertion path is refuted independently. Safe unless `bug`
/// is set, in which case exactly one block (chosen from `seed`) fails.
///   Branches: `havoc x; if (x>K) { x=x-K; assert(x>0); }`
///   Loops:    the NotZero shape with bound K
///   Mixed:    each block drawn from the two above using `seed`
std::string gen_family(FamilyKind kind, int n, std::uint64_t seed, bool bug = false);

}  // namespace partrace
