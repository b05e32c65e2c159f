#pragma once

// Shared plumbing: error type, validation reports, and finite partitions
// (equivalence relations in canonical form). Everything in this library is an
// immutable value; operations are free functions returning fresh values.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace episolve {

// ---------------------------------------------------------------------------
// Errors and reports
// ---------------------------------------------------------------------------

enum class ErrorCode {
  kInvalidArgument,     // malformed construction input (bad ids, sizes, ...)
  kInconsistentValuation,  // a product pairs states with clashing literals
  kNotProper,           // operation requires a proper frame
  kEmptyProduct,        // product update eliminated every state
  kNotAgentLocal,       // an atom's value varies inside its owner's class
  kMissingOwnership,    // operation needs an owner for every atom
  kDimension,           // homology requested above dimension 2
  kParse,               // unreadable file or formula
  kUnsolvable,          // reserved for callers that want throw-on-unsolvable
};

struct Error : std::runtime_error {
  ErrorCode code;
  Error(ErrorCode c, const std::string& what) : std::runtime_error(what), code(c) {}
};

[[noreturn]] inline void fail(ErrorCode c, const std::string& what) { throw Error(c, what); }

// Outcome of a validation pass: `ok` means no errors (warnings allowed).
struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }
  void error(std::string msg) { errors.push_back(std::move(msg)); }
  void warn(std::string msg) { warnings.push_back(std::move(msg)); }
  void merge(const ValidationReport& other) {
    errors.insert(errors.end(), other.errors.begin(), other.errors.end());
    warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
  }
};

// ---------------------------------------------------------------------------
// Small utilities
// ---------------------------------------------------------------------------

inline bool sorted_unique(const std::vector<std::string>& xs) {
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i - 1] < xs[i])) return false;
  return true;
}

// Index of `x` in a sorted vector, or -1.
inline int index_of(const std::vector<std::string>& sorted, std::string_view x) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
  if (it == sorted.end() || *it != x) return -1;
  return static_cast<int>(it - sorted.begin());
}

template <typename T>
bool contains(const std::vector<T>& xs, const T& x) {
  return std::find(xs.begin(), xs.end(), x) != xs.end();
}

inline std::string join_strings(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += xs[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Partition: an equivalence relation on {0, ..., n-1} in canonical form.
//
// Canonical form: each class lists its members in increasing order, and the
// classes are ordered by their least member. Two partitions are equal as
// relations iff they are equal as values, so operator== is structural.
// ---------------------------------------------------------------------------

class Partition {
 public:
  Partition() = default;

  static Partition identity(int n) {
    std::vector<int> cls(static_cast<std::size_t>(n));
    std::iota(cls.begin(), cls.end(), 0);
    return from_class_of(cls);
  }

  static Partition single_class(int n) {
    return from_class_of(std::vector<int>(static_cast<std::size_t>(n), 0));
  }

  // Build from an element -> class-id map (ids arbitrary, will be renumbered).
  static Partition from_class_of(const std::vector<int>& raw) {
    Partition p;
    p.n_ = static_cast<int>(raw.size());
    p.class_of_.assign(raw.size(), -1);
    std::vector<int> renumber;  // raw id -> canonical id, discovered in element order
    std::vector<int> seen_raw;
    for (int u = 0; u < p.n_; ++u) {
      int raw_id = raw[static_cast<std::size_t>(u)];
      int canon = -1;
      for (std::size_t k = 0; k < seen_raw.size(); ++k)
        if (seen_raw[k] == raw_id) { canon = static_cast<int>(k); break; }
      if (canon == -1) {
        canon = static_cast<int>(seen_raw.size());
        seen_raw.push_back(raw_id);
        p.classes_.emplace_back();
      }
      p.class_of_[static_cast<std::size_t>(u)] = canon;
      p.classes_[static_cast<std::size_t>(canon)].push_back(u);
    }
    return p;
  }

  // Build as the finest partition in which every listed group is contained in
  // one class (i.e. close the given groups under union-find).
  static Partition from_groups(int n, std::span<const std::vector<int>> groups) {
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
      }
      return x;
    };
    for (const auto& g : groups) {
      for (std::size_t i = 1; i < g.size(); ++i) {
        int a = find(g[0]), b = find(g[i]);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
    }
    std::vector<int> cls(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) cls[static_cast<std::size_t>(u)] = find(u);
    return from_class_of(cls);
  }

  int size() const { return n_; }
  int class_count() const { return static_cast<int>(classes_.size()); }
  int class_index(int u) const { return class_of_[static_cast<std::size_t>(u)]; }
  bool related(int u, int v) const {
    return class_of_[static_cast<std::size_t>(u)] == class_of_[static_cast<std::size_t>(v)];
  }
  const std::vector<std::vector<int>>& classes() const { return classes_; }
  const std::vector<int>& class_members_of(int u) const {
    return classes_[static_cast<std::size_t>(class_of_[static_cast<std::size_t>(u)])];
  }

  bool is_identity() const { return class_count() == n_; }

  // Common refinement: u ~ v iff u ~ v in both.
  Partition meet(const Partition& other) const {
    std::vector<int> cls(static_cast<std::size_t>(n_));
    for (int u = 0; u < n_; ++u)
      cls[static_cast<std::size_t>(u)] =
          class_of_[static_cast<std::size_t>(u)] * (other.class_count() + 1) +
          other.class_of_[static_cast<std::size_t>(u)];
    return from_class_of(cls);
  }

  // Transitive closure of the union of the two relations.
  Partition join(const Partition& other) const {
    std::vector<std::vector<int>> groups;
    groups.insert(groups.end(), classes_.begin(), classes_.end());
    groups.insert(groups.end(), other.classes_.begin(), other.classes_.end());
    return from_groups(n_, groups);
  }

  bool operator==(const Partition& other) const = default;

 private:
  int n_ = 0;
  std::vector<int> class_of_;
  std::vector<std::vector<int>> classes_;
};

// Meet of a family (identity when the family is empty over n elements).
inline Partition meet_all(int n, std::span<const Partition> ps) {
  Partition acc = Partition::single_class(n);
  for (const auto& p : ps) acc = acc.meet(p);
  return acc;
}

inline Partition join_all(int n, std::span<const Partition> ps) {
  Partition acc = Partition::identity(n);
  for (const auto& p : ps) acc = acc.join(p);
  return acc;
}

}  // namespace episolve
