// Canonical labeling of cover digraphs by colour refinement followed by
// individualisation/backtracking. The canonical form is the least adjacency
// encoding over all leaves of the search tree.

#include <algorithm>
#include <numeric>

#include "spsforge/order.hpp"

namespace spsforge {

namespace {

class Canonizer {
 public:
  explicit Canonizer(const FiniteOrder& order)
      : order_(order), n_(static_cast<int>(order.size())) {}

  void run() {
    // Initial colours from (height, up-degree, down-degree).
    std::vector<std::tuple<int, std::size_t, std::size_t>> inv(n_);
    for (int v = 0; v < n_; ++v) {
      inv[v] = {order_.height(v), order_.upper_covers(v).size(),
                order_.lower_covers(v).size()};
    }
    auto sorted = inv;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> colour(n_);
    for (int v = 0; v < n_; ++v) {
      colour[v] = static_cast<int>(
          std::lower_bound(sorted.begin(), sorted.end(), inv[v]) - sorted.begin());
    }
    search(std::move(colour));
  }

  const std::string& best() const { return best_; }
  const std::vector<int>& labeling() const { return best_labeling_; }

 private:
  // Splits colour classes until every vertex in a class sees the same
  // multiset of colours above and below. Class ranks are derived from
  // signatures only, so the result does not depend on vertex numbering.
  int refine(std::vector<int>& colour) const {
    int classes = count_classes(colour);
    std::vector<std::vector<int>> sig(n_);
    std::vector<int> idx(n_);
    while (true) {
      for (int v = 0; v < n_; ++v) {
        auto& s = sig[v];
        s.clear();
        s.push_back(colour[v]);
        std::size_t mark = s.size();
        for (int u : order_.upper_covers(v)) s.push_back(colour[u]);
        std::sort(s.begin() + static_cast<long>(mark), s.end());
        s.push_back(-1);
        mark = s.size();
        for (int u : order_.lower_covers(v)) s.push_back(colour[u]);
        std::sort(s.begin() + static_cast<long>(mark), s.end());
      }
      std::iota(idx.begin(), idx.end(), 0);
      std::sort(idx.begin(), idx.end(), [&](int a, int b) { return sig[a] < sig[b]; });
      int rank = 0;
      std::vector<int> next(n_);
      for (int k = 0; k < n_; ++k) {
        if (k > 0 && sig[idx[k]] != sig[idx[k - 1]]) ++rank;
        next[idx[k]] = rank;
      }
      const int next_classes = n_ == 0 ? 0 : rank + 1;
      colour = std::move(next);
      if (next_classes == classes) return classes;
      classes = next_classes;
    }
  }

  int count_classes(const std::vector<int>& colour) const {
    if (n_ == 0) return 0;
    return *std::max_element(colour.begin(), colour.end()) + 1;
  }

  void search(std::vector<int> colour) {
    const int classes = refine(colour);
    if (classes == n_) {
      leaf(colour);
      return;
    }
    // First non-singleton class.
    std::vector<int> size(classes, 0);
    for (int c : colour) ++size[c];
    int target = 0;
    while (size[target] == 1) ++target;
    for (int v = 0; v < n_; ++v) {
      if (colour[v] != target) continue;
      std::vector<int> child(colour);
      for (int w = 0; w < n_; ++w) {
        if (child[w] > target || (child[w] == target && w != v)) ++child[w];
      }
      search(std::move(child));
    }
  }

  void leaf(const std::vector<int>& position) {
    std::vector<int> at(n_);
    for (int v = 0; v < n_; ++v) at[position[v]] = v;
    std::string code;
    code.reserve(static_cast<std::size_t>(n_) * 3 + order_.covers().size());
    code.push_back(static_cast<char>(n_));
    std::vector<int> ups;
    for (int p = 0; p < n_; ++p) {
      ups.clear();
      for (int u : order_.upper_covers(at[p])) ups.push_back(position[u]);
      std::sort(ups.begin(), ups.end());
      code.push_back(static_cast<char>(ups.size()));
      for (int u : ups) code.push_back(static_cast<char>(u));
    }
    if (!have_best_ || code < best_) {
      best_ = std::move(code);
      best_labeling_ = position;
      have_best_ = true;
    }
  }

  const FiniteOrder& order_;
  int n_;
  bool have_best_ = false;
  std::string best_;
  std::vector<int> best_labeling_;
};

}  // namespace

std::string canonical_key(const FiniteOrder& order) {
  if (order.empty()) return std::string(1, '\0');
  Canonizer c(order);
  c.run();
  return c.best();
}

std::vector<int> canonical_labeling(const FiniteOrder& order) {
  if (order.empty()) return {};
  Canonizer c(order);
  c.run();
  return c.labeling();
}

}  // namespace spsforge
