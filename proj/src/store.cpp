#include "bigd/store.hpp"

#include <algorithm>
#include <stdexcept>

namespace bigd {

std::vector<BranchCode> BranchStore::within(const Vector& x, double r) const {
  std::vector<BranchCode> out;
  for (const Entry& e : entries_)
    if ((e.z - x).norm() <= r) out.push_back(e.code);
  return out;
}

std::vector<Vector> BranchStore::distinct_points() const {
  std::vector<Vector> pts;
  for (const Entry& e : entries_) {
    bool seen = false;
    for (const Vector& p : pts) {
      if (p == e.z) {
        seen = true;
        break;
      }
    }
    if (!seen) pts.push_back(e.z);
  }
  return pts;
}

void branch_point_update(BranchStore& store, const Vector& x, const Vector& x_trial,
                         const EncodableFunction& f, int cap) {
  const ActiveBranches active = f.active_branches(x_trial, cap);
  const double trial_dist = (x_trial - x).norm();
  for (const BranchCode& code : active.codes) {
    const int i = store.find(code);
    if (i < 0) {
      store.insert(code, x_trial);
    } else if (trial_dist < (store.entry(i).z - x).norm()) {
      store.replace_point(i, x_trial);
    }
  }
}

BranchSelection branch_selection(const BranchStore& store, const Vector& x, int k,
                                 const EncodableFunction& f, int cap) {
  const std::vector<Vector> pts = store.distinct_points();
  if (k < 1 || k > static_cast<int>(pts.size()))
    throw std::invalid_argument("branch selection: k exceeds distinct stored points");

  // Stable sort on distance keeps insertion order among exact ties.
  std::vector<int> order(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) order[i] = static_cast<int>(i);
  std::vector<double> dist(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) dist[i] = (pts[i] - x).norm();
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return dist[a] < dist[b]; });

  BranchSelection sel;
  for (int i = 0; i < k; ++i) {
    const Vector& z = pts[order[i]];
    sel.points.push_back(z);
    for (const BranchCode& code : f.active_branches(z, cap).codes) {
      bool seen = false;
      for (const BranchCode& c : sel.codes) {
        if (c == code) {
          seen = true;
          break;
        }
      }
      if (!seen) sel.codes.push_back(code);
    }
  }
  sel.radius = dist[order[k - 1]];
  return sel;
}

}  // namespace bigd
