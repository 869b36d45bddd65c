#include <algorithm>
#include <vector>

#include "graylap/encodings.hpp"

namespace graylap {
namespace {

// Depth-first coil/snake search on the width-dimensional cube. The path
// starts at 0, the first move flips bit 0 and each later move may flip any
// bit already used or the lowest unused one, which removes the relabeling
// symmetry of the cube.
class CoilSearch {
 public:
  CoilSearch(int width, const CoilSearchOptions& opts)
      : width_(width), opts_(opts), n_(std::size_t{1} << width),
        near_(n_, 0), in_path_(n_, 0) {}

  CoilSearchResult run() {
    push(0);
    bool stopped = false;
    if (width_ >= 1) stopped = step(1, 0);
    CoilSearchResult r;
    r.path = best_;
    r.closed = best_closed_;
    r.nodes = nodes_;
    r.exhaustive = !stopped;
    return r;
  }

 private:
  void push(Code v) {
    path_.push_back(v);
    in_path_[v] = 1;
    for (int b = 0; b < width_; ++b) ++near_[v ^ (Code{1} << b)];
  }

  void pop() {
    const Code v = path_.back();
    path_.pop_back();
    in_path_[v] = 0;
    for (int b = 0; b < width_; ++b) --near_[v ^ (Code{1} << b)];
  }

  void record(bool closed) {
    if (path_.size() > best_.size()) {
      best_ = path_;
      best_closed_ = closed;
    }
  }

  bool done() const {
    if (opts_.node_budget && nodes_ >= opts_.node_budget) return true;
    return opts_.target_length && best_.size() >= opts_.target_length;
  }

  // Returns true when the search was cut short.
  bool step(Code v, int used) {
    push(v);
    ++nodes_;
    used = std::max(used, highest_bit(v) + 1);
    if (!opts_.require_closed) record(false);
    const int limit = std::min(width_, used + 1);
    for (int b = 0; b < limit; ++b) {
      if (done()) break;
      const Code w = v ^ (Code{1} << b);
      if (in_path_[w]) continue;
      if (near_[w] == 1) {
        if (step(w, used)) {
          pop();
          return true;
        }
      } else if (opts_.require_closed && near_[w] == 2 && popcount(w) == 1 &&
                 path_.size() >= 3) {
        push(w);
        record(true);
        pop();
      }
    }
    const bool cut = done();
    pop();
    return cut;
  }

  static int highest_bit(Code v) { return v ? 63 - __builtin_clzll(v) : -1; }

  int width_;
  CoilSearchOptions opts_;
  std::size_t n_;
  std::vector<int> near_;  // path nodes adjacent to each vertex
  std::vector<char> in_path_;
  std::vector<Code> path_, best_;
  bool best_closed_ = false;
  std::uint64_t nodes_ = 0;
};

}  // namespace

CoilSearchResult search_coil(int width, const CoilSearchOptions& opts) {
  if (width < 1 || width > 16)
    throw ContractError("coil search width " + std::to_string(width) +
                        " outside [1, 16]");
  if (width == 1) {
    CoilSearchResult r;
    r.path = {0, 1};
    r.closed = true;
    r.exhaustive = true;
    return r;
  }
  return CoilSearch(width, opts).run();
}

}  // namespace graylap
