#include "heomcorr/hierarchy.hpp"

#include <sstream>

#include "heomcorr/errors.hpp"

namespace heomcorr {

namespace {

void enumerate(int slot, int remaining, HierarchyIndex& current, std::vector<int>& out) {
  if (slot == static_cast<int>(current.size())) {
    out.insert(out.end(), current.begin(), current.end());
    return;
  }
  for (int n = 0; n <= remaining; ++n) {
    current[slot] = n;
    enumerate(slot + 1, remaining - n, current, out);
  }
  current[slot] = 0;
}

}  // namespace

double hierarchy_size(int cutoff, int depth_limit) {
  const int slots = 2 * (cutoff + 1);
  double c = 1.0;
  for (int i = 1; i <= depth_limit; ++i) c = c * (slots + i) / i;
  return c;
}

Hierarchy::Hierarchy(int cutoff, int depth_limit, std::size_t max_ados)
    : cutoff_(cutoff), depth_limit_(depth_limit), slots_(2 * (cutoff + 1)) {
  if (cutoff < 0 || depth_limit < 0) throw ContractError("hierarchy needs K >= 0 and L >= 0");
  const double expected = hierarchy_size(cutoff, depth_limit);
  if (expected > static_cast<double>(max_ados)) {
    std::ostringstream os;
    os << "hierarchy K=" << cutoff << " L=" << depth_limit << " needs "
       << static_cast<std::size_t>(expected) << " ADOs, budget is " << max_ados;
    throw CapacityError(os.str(), static_cast<std::size_t>(expected));
  }

  HierarchyIndex current(static_cast<std::size_t>(slots_), 0);
  enumerate(0, depth_limit, current, counts_);

  const std::size_t n = size();
  depths_.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    const auto c = counts(p);
    HierarchyIndex key(c.begin(), c.end());
    int d = 0;
    for (int v : c) d += v;
    depths_[p] = d;
    lookup_.emplace(std::move(key), static_cast<int>(p));
  }

  up_.assign(n * slots_, kNoNeighbor);
  down_.assign(n * slots_, kNoNeighbor);
  for (std::size_t p = 0; p < n; ++p) {
    const auto c = counts(p);
    HierarchyIndex key(c.begin(), c.end());
    for (int s = 0; s < slots_; ++s) {
      if (depths_[p] < depth_limit_) {
        ++key[s];
        up_[p * slots_ + s] = lookup_.at(key);
        --key[s];
      }
      if (key[s] > 0) {
        --key[s];
        down_[p * slots_ + s] = lookup_.at(key);
        ++key[s];
      }
    }
  }
}

int Hierarchy::position(const HierarchyIndex& index) const {
  const auto it = lookup_.find(index);
  return it == lookup_.end() ? kNoNeighbor : it->second;
}

}  // namespace heomcorr
