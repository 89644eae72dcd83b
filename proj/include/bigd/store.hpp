#pragma once

#include <unordered_map>
#include <vector>

#include "bigd/expr.hpp"

namespace bigd {

// Dynamic set of discovered branches with one representative point each.
// Entries keep insertion order; lookups go through a hash index. Every
// stored point was active for its code when recorded.
class BranchStore {
 public:
  struct Entry {
    BranchCode code;
    Vector z;
  };

  int size() const { return static_cast<int>(entries_.size()); }
  bool empty() const { return entries_.empty(); }
  const Entry& entry(int i) const { return entries_[i]; }
  int find(const BranchCode& code) const {
    auto it = index_.find(code);
    return it == index_.end() ? -1 : it->second;
  }
  bool contains(const BranchCode& code) const { return find(code) >= 0; }

  void insert(const BranchCode& code, const Vector& z) {
    index_.emplace(code, size());
    entries_.push_back({code, z});
  }
  void replace_point(int i, const Vector& z) { entries_[i].z = z; }

  // Codes whose representative lies within radius r of x, insertion order.
  std::vector<BranchCode> within(const Vector& x, double r) const;

  // Distinct representative points (exact coordinate equality), ordered by
  // first insertion. Several codes may share one point.
  std::vector<Vector> distinct_points() const;

 private:
  std::vector<Entry> entries_;
  std::unordered_map<BranchCode, int, BranchCodeHash> index_;
};

// Records the branches active at x_trial: unseen codes are inserted with
// representative x_trial; a seen code's point moves to x_trial only when
// that brings it strictly closer to x.
void branch_point_update(BranchStore& store, const Vector& x, const Vector& x_trial,
                         const EncodableFunction& f, int cap = kDefaultBranchCap);

struct BranchSelection {
  std::vector<BranchCode> codes;  // union of active sets at the k points
  double radius = 0.0;            // distance to the k-th nearest point
  std::vector<Vector> points;     // the k selected points
};

// Selects the k distinct nearest stored points from x (ties by insertion
// order) and returns the union of their active branch sets.
BranchSelection branch_selection(const BranchStore& store, const Vector& x, int k,
                                 const EncodableFunction& f,
                                 int cap = kDefaultBranchCap);

}  // namespace bigd
