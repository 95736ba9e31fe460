#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "ssvrp/model.hpp"

namespace ssvrp::detail {

// Horizon-sized time axis wide enough for every event time the tables store.
inline int time_span(const Instance& inst) {
  return inst.horizon() + 2 * inst.max_travel() + inst.max_service() + 3;
}

// Dense probability table over (time, load) that remembers the range of
// times holding mass so clears and sweeps stay local.
class TimeLoadGrid {
 public:
  TimeLoadGrid() = default;
  TimeLoadGrid(int span, int loads) { reset_shape(span, loads); }

  void reset_shape(int span, int loads) {
    span_ = span;
    loads_ = loads;
    data_.assign(static_cast<std::size_t>(span) * loads, 0.0);
    lo_ = span_;
    hi_ = -1;
  }

  int span() const { return span_; }
  int loads() const { return loads_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  bool empty() const { return hi_ < lo_; }

  double at(int t, int q) const { return data_[static_cast<std::size_t>(t) * loads_ + q]; }
  const double* row(int t) const { return &data_[static_cast<std::size_t>(t) * loads_]; }

  void add(int t, int q, double m) {
    if (t < 0 || t >= span_ || q < 0 || q >= loads_) throw std::logic_error("probability table index out of range");
    data_[static_cast<std::size_t>(t) * loads_ + q] += m;
    lo_ = std::min(lo_, t);
    hi_ = std::max(hi_, t);
  }

  void clear() {
    if (!empty())
      std::fill(data_.begin() + static_cast<std::ptrdiff_t>(lo_) * loads_,
                data_.begin() + static_cast<std::ptrdiff_t>(hi_ + 1) * loads_, 0.0);
    lo_ = span_;
    hi_ = -1;
  }

  double total() const {
    double s = 0.0;
    for (int t = lo_; t <= hi_; ++t)
      for (int q = 0; q < loads_; ++q) s += at(t, q);
    return s;
  }

 private:
  int span_ = 0;
  int loads_ = 1;
  std::vector<double> data_;
  int lo_ = 0;
  int hi_ = -1;
};

}  // namespace ssvrp::detail
