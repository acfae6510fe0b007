#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace heomcorr {

/// Occupation numbers n_mk of one auxiliary density operator, flattened with
/// slot = m * (K + 1) + k for bath m in {0, 1} and Matsubara term k.
using HierarchyIndex = std::vector<int>;

inline constexpr int kNoNeighbor = -1;
inline constexpr std::size_t kDefaultMaxAdos = 200000;

/// Enumerated multi-indices with depth <= L plus flat neighbor tables.
///
/// Indices are stored in lexicographic order of their occupation vectors, so
/// position 0 is always the physical (all-zero) density matrix. up(p, s) and
/// down(p, s) give the position of n +/- e_s or kNoNeighbor when that index
/// falls outside the truncation.
class Hierarchy {
 public:
  Hierarchy(int cutoff, int depth_limit, std::size_t max_ados = kDefaultMaxAdos);

  int cutoff() const { return cutoff_; }
  int depth_limit() const { return depth_limit_; }
  int slots() const { return slots_; }
  std::size_t size() const { return counts_.size() / static_cast<std::size_t>(slots_); }

  std::span<const int> counts(std::size_t pos) const {
    return {counts_.data() + pos * slots_, static_cast<std::size_t>(slots_)};
  }
  int count(std::size_t pos, int slot) const { return counts_[pos * slots_ + slot]; }
  int depth(std::size_t pos) const { return depths_[pos]; }
  int up(std::size_t pos, int slot) const { return up_[pos * slots_ + slot]; }
  int down(std::size_t pos, int slot) const { return down_[pos * slots_ + slot]; }

  /// Position of a multi-index, or kNoNeighbor if it is not enumerated.
  int position(const HierarchyIndex& index) const;

  static int slot_of(int bath, int term, int cutoff) { return bath * (cutoff + 1) + term; }

 private:
  int cutoff_;
  int depth_limit_;
  int slots_;
  std::vector<int> counts_;
  std::vector<int> depths_;
  std::vector<int> up_;
  std::vector<int> down_;
  std::map<HierarchyIndex, int> lookup_;
};

/// binomial(slots + depth, depth): number of multi-indices of depth <= depth.
double hierarchy_size(int cutoff, int depth_limit);

}  // namespace heomcorr
