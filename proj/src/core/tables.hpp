#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "core/bigint.hpp"
#include "core/error.hpp"

namespace tw {

// Dense exact table of weighted walk counts indexed (length n, end height m
// in tau units, interaction mark). Counts are exact integers; the numeric
// weight of a bin is exp(bin_log_weight(mark, n)), applied at analysis time.
class ExactTable {
 public:
  ExactTable() = default;
  ExactTable(int nmax, int mark_dim)
      : nmax_(nmax), mark_dim_(mark_dim),
        v_((std::size_t)(nmax + 1) * (std::size_t)(2 * nmax + 1) * (std::size_t)mark_dim) {}

  int nmax() const { return nmax_; }
  int mark_dim() const { return mark_dim_; }

  BigInt& at(int n, int m, int mark) { return v_[index(n, m, mark)]; }
  const BigInt& at(int n, int m, int mark) const { return v_[index(n, m, mark)]; }

  // sum over marks (exact count, ignores numeric bin weights)
  BigInt count(int n, int m) const {
    BigInt s = 0;
    for (int j = 0; j < mark_dim_; ++j) s += at(n, m, j);
    return s;
  }

  bool operator==(const ExactTable& o) const {
    return nmax_ == o.nmax_ && mark_dim_ == o.mark_dim_ && v_ == o.v_;
  }

 private:
  std::size_t index(int n, int m, int mark) const {
    if (n < 0 || n > nmax_ || m < -nmax_ || m > nmax_ || mark < 0 || mark >= mark_dim_)
      fail(ErrorCode::Usage, "table index out of range");
    return ((std::size_t)n * (std::size_t)(2 * nmax_ + 1) + (std::size_t)(m + nmax_)) *
               (std::size_t)mark_dim_ +
           (std::size_t)mark;
  }

  int nmax_ = -1;
  int mark_dim_ = 1;
  std::vector<BigInt> v_;
};

// Full enumeration product for one (model, weight, nmax) run.
struct WalkTables {
  std::string model;    // canonical descriptors
  std::string weight;
  int nmax = 0;
  std::uint64_t w_base = 2;  // e^tau

  ExactTable partition;  // N[n][m][mark]
  ExactTable up_bridge;  // a: end at running max, start at running min (=0)
  ExactTable down_bridge;  // d: stored at m = |end height|
  ExactTable upper_half;  // h: strictly above start after time 0
  ExactTable rev_descent;  // r: never below start

  // optional: per-vertex endpoint decomposition (indicator weights only)
  bool has_two_point = false;
  int vertex_count = 0;
  std::vector<BigInt> two_point;        // [vertex * (nmax+1) + n]
  std::vector<std::int32_t> tp_height;  // height_units per vertex
  std::vector<std::int32_t> tp_dist;    // graph distance from root per vertex

  const BigInt& g_part(int vertex, int n) const {
    return two_point[(std::size_t)vertex * (std::size_t)(nmax + 1) + (std::size_t)n];
  }

  // A[n][j] = sum of up-bridge counts into slab j (t0_units = 1 for the
  // catalog, so this is the a-column), as exact integers per mark.
  BigInt slab_bridge(int n, int j, int mark) const { return up_bridge.at(n, j, mark); }
};

void write_tables(const WalkTables& t, std::ostream& os);
WalkTables read_tables(std::istream& is);

void write_tables_file(const WalkTables& t, const std::string& path);
WalkTables read_tables_file(const std::string& path);

}  // namespace tw
